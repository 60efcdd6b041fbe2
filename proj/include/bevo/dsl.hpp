#pragma once

// Line-oriented text formats for domains (.bevd), scenarios (.bevs) and
// ranking tables (.bevr), plus text and JSON rendering of evolution results.
//
// State literals list the true fluents: `{}` is the all-false state and
// `{ {}, {Acid} }` is a set of two states. `#` starts a comment.

#include "evolution.hpp"
#include "formula.hpp"
#include "kernel.hpp"
#include "revision.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace bevo
{

/// Diagnostic with a 1-based source position.
class parse_error : public error
{
public:
    parse_error( std::size_t line, std::size_t column, const std::string& message )
            : error( std::to_string( line ) + ":" + std::to_string( column ) + ": " + message ), _line{ line },
              _column{ column }, _message{ message }
    {
    }

    [[nodiscard]] std::size_t line() const { return _line; }
    [[nodiscard]] std::size_t column() const { return _column; }
    [[nodiscard]] const std::string& message() const { return _message; }

private:
    std::size_t _line;
    std::size_t _column;
    std::string _message;
};

struct domain_doc
{
    std::string name;
    transition_system ts;
    bool deterministic_pragma = false;
    bool strict_pragma = false;

    [[nodiscard]] const signature& sig() const { return ts.sig(); }

    friend bool operator==( const domain_doc&, const domain_doc& ) = default;
};

enum class evolution_mode
{
    credulous,
    skeptical
};

struct scenario_doc
{
    std::string name;
    state_set initial;
    world_view view;
    bevo::reliability reliability = bevo::reliability::recency();
    evolution_mode mode = evolution_mode::credulous;

    friend bool operator==( const scenario_doc&, const scenario_doc& ) = default;
};

struct ranking_doc
{
    std::string name;
    std::vector<faithful_ranking> tables;

    friend bool operator==( const ranking_doc&, const ranking_doc& ) = default;
};

namespace detail
{

enum class tok
{
    ident,
    integer,
    lbrace,
    rbrace,
    comma,
    colon,
    arrow,
    iff,
    bang,
    amp,
    bar,
    lparen,
    rparen,
    end
};

struct token
{
    tok kind;
    std::string text;
    std::size_t line;
    std::size_t column;
};

inline const char* describe( tok k )
{
    switch ( k )
    {
    case tok::ident: return "a name";
    case tok::integer: return "an integer";
    case tok::lbrace: return "'{'";
    case tok::rbrace: return "'}'";
    case tok::comma: return "','";
    case tok::colon: return "':'";
    case tok::arrow: return "'->'";
    case tok::iff: return "'<->'";
    case tok::bang: return "'!'";
    case tok::amp: return "'&'";
    case tok::bar: return "'|'";
    case tok::lparen: return "'('";
    case tok::rparen: return "')'";
    case tok::end: return "end of line";
    }
    return "token";
}

inline bool ident_head( char c ) { return ( c >= 'a' && c <= 'z' ) || ( c >= 'A' && c <= 'Z' ) || c == '_'; }
inline bool is_digit( char c ) { return c >= '0' && c <= '9'; }

// Tokens of one line, ending with a tok::end sentinel. Comments are dropped.
inline std::vector<token> lex_line( std::string_view text, std::size_t line )
{
    std::vector<token> out;
    std::size_t i = 0;
    auto push = [ & ]( tok k, std::size_t len ) {
        out.push_back( { k, std::string( text.substr( i, len ) ), line, i + 1 } );
        i += len;
    };
    while ( i < text.size() )
    {
        char c = text[ i ];
        if ( c == '#' )
            break;
        if ( c == ' ' || c == '\t' || c == '\r' )
        {
            ++i;
            continue;
        }
        if ( ident_head( c ) )
        {
            std::size_t j = i + 1;
            while ( j < text.size() && ( ident_head( text[ j ] ) || is_digit( text[ j ] ) ) )
                ++j;
            push( tok::ident, j - i );
            continue;
        }
        if ( is_digit( c ) || ( c == '-' && i + 1 < text.size() && is_digit( text[ i + 1 ] ) ) )
        {
            std::size_t j = i + 1;
            while ( j < text.size() && is_digit( text[ j ] ) )
                ++j;
            push( tok::integer, j - i );
            continue;
        }
        switch ( c )
        {
        case '{': push( tok::lbrace, 1 ); continue;
        case '}': push( tok::rbrace, 1 ); continue;
        case ',': push( tok::comma, 1 ); continue;
        case ':': push( tok::colon, 1 ); continue;
        case '!': push( tok::bang, 1 ); continue;
        case '&': push( tok::amp, 1 ); continue;
        case '|': push( tok::bar, 1 ); continue;
        case '(': push( tok::lparen, 1 ); continue;
        case ')': push( tok::rparen, 1 ); continue;
        default: break;
        }
        if ( text.substr( i, 2 ) == "->" )
        {
            push( tok::arrow, 2 );
            continue;
        }
        if ( text.substr( i, 3 ) == "<->" )
        {
            push( tok::iff, 3 );
            continue;
        }
        auto byte = static_cast<unsigned char>( c );
        std::string shown = byte >= 0x20 && byte < 0x7f ? std::string( "'" ) + c + "'"
                                                        : "byte 0x" + std::to_string( byte );
        throw parse_error( line, i + 1, "unexpected character " + shown );
    }
    out.push_back( { tok::end, {}, line, text.size() + 1 } );
    return out;
}

// One non-blank line of a document.
using statement = std::vector<token>;

inline std::vector<statement> split_statements( std::string_view text )
{
    std::vector<statement> out;
    std::size_t line = 1;
    std::size_t start = 0;
    while ( start <= text.size() )
    {
        auto stop = text.find( '\n', start );
        if ( stop == std::string_view::npos )
            stop = text.size();
        auto toks = lex_line( text.substr( start, stop - start ), line );
        if ( toks.size() > 1 )
            out.push_back( std::move( toks ) );
        start = stop + 1;
        ++line;
    }
    return out;
}

inline constexpr int max_formula_depth = 200;

class cursor
{
public:
    explicit cursor( const statement& toks ) : _toks{ toks } {}

    [[nodiscard]] const token& peek() const { return _toks[ _pos ]; }
    const token& next()
    {
        const auto& t = _toks[ _pos ];
        if ( t.kind != tok::end )
            ++_pos;
        return t;
    }
    [[nodiscard]] bool at( tok k ) const { return peek().kind == k; }

    const token& expect( tok k, const char* what = nullptr )
    {
        if ( !at( k ) )
            fail( peek(), std::string( "expected " ) + ( what ? what : describe( k ) ) + ", found " + found() );
        return next();
    }

    void expect_end()
    {
        if ( !at( tok::end ) )
            fail( peek(), "unexpected " + found() );
    }

    [[nodiscard]] std::string found() const
    {
        const auto& t = peek();
        if ( t.kind == tok::end )
            return "end of line";
        return "'" + t.text + "'";
    }

    [[noreturn]] static void fail( const token& t, const std::string& message )
    {
        throw parse_error( t.line, t.column, message );
    }

private:
    const statement& _toks;
    std::size_t _pos = 0;
};

inline state_index parse_state( cursor& c, const signature& sig )
{
    c.expect( tok::lbrace, "a state literal" );
    state_index s = 0;
    if ( c.at( tok::rbrace ) )
    {
        c.next();
        return s;
    }
    for ( ;; )
    {
        const auto& name = c.expect( tok::ident, "a fluent name" );
        auto k = sig.find_fluent( name.text );
        if ( !k )
            cursor::fail( name, "unknown fluent '" + name.text + "'" );
        auto bit = state_index{ 1 } << *k;
        if ( s & bit )
            cursor::fail( name, "fluent '" + name.text + "' listed twice" );
        s |= bit;
        if ( c.at( tok::comma ) )
        {
            c.next();
            continue;
        }
        c.expect( tok::rbrace, "',' or '}'" );
        return s;
    }
}

inline state_set parse_state_set( cursor& c, const signature& sig )
{
    c.expect( tok::lbrace, "a state-set literal" );
    auto out = sig.no_states();
    if ( c.at( tok::rbrace ) )
    {
        c.next();
        return out;
    }
    for ( ;; )
    {
        out.insert( parse_state( c, sig ) );
        if ( c.at( tok::comma ) )
        {
            c.next();
            continue;
        }
        c.expect( tok::rbrace, "',' or '}'" );
        return out;
    }
}

// Recursive descent, loosest operator first. A null sig skips atom checks.
class formula_parser
{
public:
    formula_parser( cursor& c, const signature* sig ) : _c{ c }, _sig{ sig } {}

    formula parse() { return equivalence( 0 ); }

private:
    void guard( int depth )
    {
        if ( depth > max_formula_depth )
            cursor::fail( _c.peek(), "formula nested too deeply" );
    }

    // depth tracks the height of the tree built so far, so precedence levels
    // that add no node do not count.
    formula equivalence( int depth )
    {
        auto lhs = implication( depth );
        if ( !_c.at( tok::iff ) )
            return lhs;
        _c.next();
        guard( depth + 1 );
        return formula::equivalence( std::move( lhs ), equivalence( depth + 1 ) );
    }

    formula implication( int depth )
    {
        auto lhs = disjunction( depth );
        if ( !_c.at( tok::arrow ) )
            return lhs;
        _c.next();
        guard( depth + 1 );
        return formula::implication( std::move( lhs ), implication( depth + 1 ) );
    }

    formula disjunction( int depth )
    {
        auto lhs = conjunction( depth );
        while ( _c.at( tok::bar ) )
        {
            _c.next();
            guard( ++depth );
            lhs = formula::disjunction( std::move( lhs ), conjunction( depth ) );
        }
        return lhs;
    }

    formula conjunction( int depth )
    {
        auto lhs = unary( depth );
        while ( _c.at( tok::amp ) )
        {
            _c.next();
            guard( ++depth );
            lhs = formula::conjunction( std::move( lhs ), unary( depth ) );
        }
        return lhs;
    }

    formula unary( int depth )
    {
        if ( _c.at( tok::bang ) )
        {
            _c.next();
            guard( depth + 1 );
            return formula::negation( unary( depth + 1 ) );
        }
        if ( _c.at( tok::lparen ) )
        {
            _c.next();
            guard( depth + 1 );
            auto inner = equivalence( depth + 1 );
            _c.expect( tok::rparen );
            return inner;
        }
        const auto& name = _c.expect( tok::ident, "a fluent name, '!' or '('" );
        if ( _sig && !_sig->find_fluent( name.text ) )
            cursor::fail( name, "unknown fluent '" + name.text + "'" );
        return formula::atom( name.text );
    }

    cursor& _c;
    const signature* _sig;
};

// `states { ... }` or `formula EXPR`, consuming the rest of the statement.
inline state_set parse_observation( cursor& c, const signature& sig )
{
    const auto& kw = c.expect( tok::ident, "'states' or 'formula'" );
    state_set out;
    if ( kw.text == "states" )
        out = parse_state_set( c, sig );
    else if ( kw.text == "formula" )
        out = models( formula_parser( c, &sig ).parse(), sig );
    else
        cursor::fail( kw, "expected 'states' or 'formula', found '" + kw.text + "'" );
    c.expect_end();
    return out;
}

inline int parse_int( const token& t )
{
    int value = 0;
    auto first = t.text.data();
    auto last = first + t.text.size();
    auto [ ptr, ec ] = std::from_chars( first, last, value );
    if ( ec != std::errc{} || ptr != last )
        cursor::fail( t, "integer '" + t.text + "' out of range" );
    return value;
}

inline std::string single_name( cursor& c )
{
    const auto& name = c.expect( tok::ident, "a name" );
    c.expect_end();
    return name.text;
}

inline void once( std::optional<std::size_t>& seen, const token& kw )
{
    if ( seen )
        cursor::fail( kw, "'" + kw.text + "' given twice (first on line " + std::to_string( *seen ) + ")" );
    seen = kw.line;
}

inline std::vector<std::string> name_list( cursor& c )
{
    std::vector<std::string> out;
    while ( c.at( tok::ident ) )
        out.push_back( c.next().text );
    c.expect_end();
    return out;
}

} // namespace detail

/// Standalone formula, without checking its atoms against a signature.
inline formula parse_formula( std::string_view text )
{
    if ( text.find( '\n' ) != std::string_view::npos )
        throw parse_error( 1, text.find( '\n' ) + 1, "formula must fit on one line" );
    auto toks = detail::lex_line( text, 1 );
    detail::cursor c( toks );
    auto f = detail::formula_parser( c, nullptr ).parse();
    c.expect_end();
    return f;
}

/// A state-set literal (text starting with '{') or a formula, as accepted on the command line.
inline state_set parse_state_set( std::string_view text, const signature& sig )
{
    if ( text.find( '\n' ) != std::string_view::npos )
        throw parse_error( 1, text.find( '\n' ) + 1, "expression must fit on one line" );
    auto toks = detail::lex_line( text, 1 );
    detail::cursor c( toks );
    state_set out;
    if ( c.at( detail::tok::lbrace ) )
        out = detail::parse_state_set( c, sig );
    else
        out = models( detail::formula_parser( c, &sig ).parse(), sig );
    c.expect_end();
    return out;
}

inline domain_doc parse_domain( std::string_view text )
{
    using detail::tok;
    auto statements = detail::split_statements( text );

    std::string name;
    std::vector<std::string> fluents, actions;
    std::optional<std::size_t> seen_domain, seen_fluents, seen_actions, seen_det, seen_strict;
    const detail::token* fluents_kw = nullptr;
    std::vector<const detail::statement*> transitions;

    for ( const auto& st : statements )
    {
        detail::cursor c( st );
        const auto& kw = c.expect( tok::ident, "a keyword" );
        if ( kw.text == "domain" )
        {
            detail::once( seen_domain, kw );
            name = detail::single_name( c );
        }
        else if ( kw.text == "fluents" )
        {
            detail::once( seen_fluents, kw );
            fluents_kw = &kw;
            fluents = detail::name_list( c );
            if ( fluents.empty() )
                detail::cursor::fail( kw, "'fluents' needs at least one name" );
        }
        else if ( kw.text == "actions" )
        {
            detail::once( seen_actions, kw );
            actions = detail::name_list( c );
        }
        else if ( kw.text == "deterministic" )
        {
            detail::once( seen_det, kw );
            c.expect_end();
        }
        else if ( kw.text == "strict" )
        {
            detail::once( seen_strict, kw );
            c.expect_end();
        }
        else if ( kw.text == "transition" )
            transitions.push_back( &st );
        else
            detail::cursor::fail( kw, "unknown keyword '" + kw.text + "'" );
    }

    if ( !fluents_kw )
        throw parse_error( 1, 1, "domain declares no fluents" );

    std::optional<signature> sig;
    try
    {
        sig.emplace( fluents, actions );
    }
    catch ( const parse_error& )
    {
        throw;
    }
    catch ( const error& e )
    {
        throw parse_error( fluents_kw->line, fluents_kw->column, e.what() );
    }

    std::vector<transition> listed;
    std::vector<std::pair<state_index, action_id>> sources;
    for ( const auto* st : transitions )
    {
        detail::cursor c( *st );
        c.next();
        const auto& act = c.expect( tok::ident, "an action name" );
        auto a = sig->find_action( act.text );
        if ( !a )
            detail::cursor::fail( act, "unknown action '" + act.text + "'" );
        if ( *a == sig->null_action() )
            detail::cursor::fail( act, "transitions for the null action '" + act.text + "' are implicit" );
        c.expect( tok::colon );
        const auto& from_tok = c.peek();
        auto from = detail::parse_state( c, *sig );
        c.expect( tok::arrow );
        auto to = detail::parse_state( c, *sig );
        c.expect_end();
        if ( seen_det )
        {
            std::pair<state_index, action_id> key{ from, *a };
            if ( std::find( sources.begin(), sources.end(), key ) != sources.end() )
                detail::cursor::fail( from_tok, "deterministic domain lists two transitions for action '" +
                                                    act.text + "' from this state" );
            sources.push_back( key );
        }
        listed.push_back( { from, *a, to } );
    }

    try
    {
        auto ts = complete_transitions( *sig, listed, seen_strict ? completion::strict : completion::self_loops );
        return domain_doc{ name, std::move( ts ), seen_det.has_value(), seen_strict.has_value() };
    }
    catch ( const parse_error& )
    {
        throw;
    }
    catch ( const error& e )
    {
        throw parse_error( *seen_strict, 1, e.what() );
    }
}

inline scenario_doc parse_scenario( std::string_view text, const domain_doc& dom )
{
    using detail::tok;
    const auto& sig = dom.sig();
    auto statements = detail::split_statements( text );

    std::string name;
    std::optional<state_set> initial;
    std::optional<std::size_t> seen_name, seen_initial, seen_rel, seen_mode;
    const detail::token* rel_kw = nullptr;
    auto rel = reliability::recency();
    auto mode = evolution_mode::credulous;
    action_trajectory actions;
    observation_trajectory observations;
    std::optional<action_id> pending;

    for ( const auto& st : statements )
    {
        detail::cursor c( st );
        const auto& kw = c.expect( tok::ident, "a keyword" );
        if ( kw.text == "scenario" )
        {
            detail::once( seen_name, kw );
            name = detail::single_name( c );
        }
        else if ( kw.text == "initial" )
        {
            detail::once( seen_initial, kw );
            initial = detail::parse_observation( c, sig );
            if ( initial->empty() )
                detail::cursor::fail( kw, "initial belief state is empty" );
        }
        else if ( kw.text == "act" )
        {
            const auto& act = c.expect( tok::ident, "an action name" );
            auto a = sig.find_action( act.text );
            if ( !a )
                detail::cursor::fail( act, "unknown action '" + act.text + "'" );
            c.expect_end();
            if ( pending )
            {
                actions.push_back( *pending );
                observations.push_back( sig.all_states() );
            }
            pending = *a;
        }
        else if ( kw.text == "obs" )
        {
            auto alpha = detail::parse_observation( c, sig );
            actions.push_back( pending.value_or( sig.null_action() ) );
            observations.push_back( std::move( alpha ) );
            pending.reset();
        }
        else if ( kw.text == "reliability" )
        {
            detail::once( seen_rel, kw );
            rel_kw = &kw;
            const auto& which = c.expect( tok::ident, "'recency', 'constant' or 'weights'" );
            if ( which.text == "recency" )
                rel = reliability::recency();
            else if ( which.text == "constant" )
                rel = reliability::constant();
            else if ( which.text == "weights" )
            {
                std::vector<int> w;
                while ( c.at( tok::integer ) )
                    w.push_back( detail::parse_int( c.next() ) );
                if ( w.empty() )
                    detail::cursor::fail( c.peek(), "expected at least one weight" );
                rel = reliability::weights( std::move( w ) );
            }
            else
                detail::cursor::fail( which, "unknown reliability '" + which.text + "'" );
            c.expect_end();
        }
        else if ( kw.text == "mode" )
        {
            detail::once( seen_mode, kw );
            const auto& which = c.expect( tok::ident, "'credulous' or 'skeptical'" );
            if ( which.text == "credulous" )
                mode = evolution_mode::credulous;
            else if ( which.text == "skeptical" )
                mode = evolution_mode::skeptical;
            else
                detail::cursor::fail( which, "unknown mode '" + which.text + "'" );
            c.expect_end();
        }
        else
            detail::cursor::fail( kw, "unknown keyword '" + kw.text + "'" );
    }

    if ( pending )
    {
        actions.push_back( *pending );
        observations.push_back( sig.all_states() );
    }
    if ( !initial )
        throw parse_error( 1, 1, "scenario has no 'initial' belief state" );
    if ( actions.empty() )
        throw parse_error( 1, 1, "scenario has no 'act' or 'obs' steps" );
    if ( rel.type() == reliability::kind::weights && rel.explicit_weights().size() != observations.size() )
        throw parse_error( rel_kw->line, rel_kw->column,
                           "reliability gives " + std::to_string( rel.explicit_weights().size() ) +
                               " weights for " + std::to_string( observations.size() ) + " observations" );

    return scenario_doc{ name, std::move( *initial ), world_view( std::move( actions ), std::move( observations ) ),
                         std::move( rel ), mode };
}

/// Ranking tables. Each `base` line opens a table; `rank STATE N` sets one
/// state and `default N` covers the rest. Every table must be faithful.
inline ranking_doc parse_ranking( std::string_view text, const signature& sig )
{
    using detail::tok;
    auto statements = detail::split_statements( text );

    struct pending_table
    {
        const detail::token* kw;
        state_set base;
        std::vector<std::optional<rank_t>> ranks;
        std::optional<rank_t> fallback;
    };

    ranking_doc doc;
    std::optional<std::size_t> seen_name;
    std::vector<pending_table> tables;

    auto natural = [ & ]( detail::cursor& c ) {
        const auto& t = c.expect( tok::integer, "a rank" );
        auto v = detail::parse_int( t );
        if ( v < 0 )
            detail::cursor::fail( t, "ranks must be non-negative" );
        return static_cast<rank_t>( v );
    };

    for ( const auto& st : statements )
    {
        detail::cursor c( st );
        const auto& kw = c.expect( tok::ident, "a keyword" );
        if ( kw.text == "ranking" )
        {
            detail::once( seen_name, kw );
            doc.name = detail::single_name( c );
        }
        else if ( kw.text == "base" )
        {
            auto base = detail::parse_state_set( c, sig );
            c.expect_end();
            if ( base.empty() )
                detail::cursor::fail( kw, "ranking base must not be empty" );
            for ( const auto& t : tables )
                if ( t.base == base )
                    detail::cursor::fail( kw, "a table for this base already starts on line " +
                                                  std::to_string( t.kw->line ) );
            tables.push_back( { &kw, std::move( base ), std::vector<std::optional<rank_t>>( sig.state_count() ), {} } );
        }
        else if ( kw.text == "rank" || kw.text == "default" )
        {
            if ( tables.empty() )
                detail::cursor::fail( kw, "'" + kw.text + "' before any 'base'" );
            auto& t = tables.back();
            if ( kw.text == "rank" )
            {
                const auto& at = c.peek();
                auto s = detail::parse_state( c, sig );
                auto r = natural( c );
                c.expect_end();
                if ( t.ranks[ s ] )
                    detail::cursor::fail( at, "state ranked twice in this table" );
                t.ranks[ s ] = r;
            }
            else
            {
                auto r = natural( c );
                c.expect_end();
                if ( t.fallback )
                    detail::cursor::fail( kw, "'default' given twice in this table" );
                t.fallback = r;
            }
        }
        else
            detail::cursor::fail( kw, "unknown keyword '" + kw.text + "'" );
    }

    if ( tables.empty() )
        throw parse_error( 1, 1, "ranking file has no 'base' table" );
    for ( auto& t : tables )
    {
        std::vector<rank_t> ranks( sig.state_count() );
        for ( state_index s = 0; s < ranks.size(); ++s )
        {
            if ( !t.ranks[ s ] && !t.fallback )
                throw parse_error( t.kw->line, t.kw->column,
                                   "table leaves a state unranked and has no 'default'" );
            ranks[ s ] = t.ranks[ s ].value_or( t.fallback.value_or( 0 ) );
        }
        faithful_ranking r( std::move( t.base ), std::move( ranks ) );
        if ( !check_faithful( r ) )
            throw parse_error( t.kw->line, t.kw->column, "ranking is not faithful to its base" );
        doc.tables.push_back( std::move( r ) );
    }
    return doc;
}

// ---------------------------------------------------------------------------
// Rendering

inline std::string format_state( state_index s, const signature& sig )
{
    std::string out = "{";
    bool first = true;
    for ( const auto& f : sig.true_fluents( s ) )
    {
        out += first ? "" : ", ";
        out += f;
        first = false;
    }
    return out + "}";
}

inline std::string format_state_set( const state_set& set, const signature& sig )
{
    if ( set.empty() )
        return "{ }";
    std::string out = "{ ";
    bool first = true;
    set.for_each( [ & ]( state_index s ) {
        out += first ? "" : ", ";
        out += format_state( s, sig );
        first = false;
    } );
    return out + " }";
}

inline std::string serialize_domain( const domain_doc& doc )
{
    const auto& sig = doc.sig();
    const auto null = sig.null_action();
    std::ostringstream out;
    if ( !doc.name.empty() )
        out << "domain " << doc.name << "\n";
    out << "fluents";
    for ( const auto& f : sig.fluents() )
        out << " " << f;
    out << "\n";
    if ( sig.actions().size() > 1 )
    {
        out << "actions";
        for ( const auto& a : sig.actions() )
            if ( a != null_action_name )
                out << " " << a;
        out << "\n";
    }
    if ( doc.deterministic_pragma )
        out << "deterministic\n";
    if ( doc.strict_pragma )
        out << "strict\n";
    for ( std::uint32_t a = 0; a < sig.actions().size(); ++a )
    {
        action_id act{ a };
        if ( act == null )
            continue;
        for ( state_index s = 0; s < sig.state_count(); ++s )
        {
            auto succ = doc.ts.successors( s, act );
            if ( !doc.strict_pragma && succ.size() == 1 && succ.front() == s )
                continue;
            for ( auto t : succ )
                out << "transition " << sig.actions()[ a ] << ": " << format_state( s, sig ) << " -> "
                    << format_state( t, sig ) << "\n";
        }
    }
    return out.str();
}

inline std::string serialize_scenario( const scenario_doc& doc, const signature& sig )
{
    std::ostringstream out;
    if ( !doc.name.empty() )
        out << "scenario " << doc.name << "\n";
    out << "initial states " << format_state_set( doc.initial, sig ) << "\n";
    for ( std::size_t i = 0; i < doc.view.size(); ++i )
    {
        out << "act " << sig.action_name( doc.view.actions()[ i ] ) << "\n";
        out << "obs states " << format_state_set( doc.view.observations()[ i ], sig ) << "\n";
    }
    switch ( doc.reliability.type() )
    {
    case reliability::kind::recency: out << "reliability recency\n"; break;
    case reliability::kind::constant: out << "reliability constant\n"; break;
    case reliability::kind::weights:
        out << "reliability weights";
        for ( auto w : doc.reliability.explicit_weights() )
            out << " " << w;
        out << "\n";
        break;
    }
    out << "mode " << ( doc.mode == evolution_mode::skeptical ? "skeptical" : "credulous" ) << "\n";
    return out.str();
}

inline std::string serialize_ranking( const ranking_doc& doc, const signature& sig )
{
    std::ostringstream out;
    if ( !doc.name.empty() )
        out << "ranking " << doc.name << "\n";
    for ( const auto& t : doc.tables )
    {
        out << "base " << format_state_set( t.base(), sig ) << "\n";
        for ( state_index s = 0; s < t.universe(); ++s )
            out << "rank " << format_state( s, sig ) << " " << t.rank( s ) << "\n";
    }
    return out.str();
}

enum class output_format
{
    text,
    machine
};

/// Observation trajectory with discarded (2^F) positions shown as `2^F`.
inline std::string format_observations( const observation_trajectory& obs, const signature& sig )
{
    std::string out = "<";
    for ( std::size_t i = 0; i < obs.size(); ++i )
        out += ( i ? ", " : "" ) + ( obs[ i ].is_full() ? std::string( "2^F" ) : format_state_set( obs[ i ], sig ) );
    return out + ">";
}

inline std::string format_trajectory_text( const belief_trajectory& traj, const signature& sig )
{
    std::string out;
    for ( std::size_t i = 0; i < traj.size(); ++i )
        out += "k" + std::to_string( i ) + " = " + format_state_set( traj[ i ], sig ) + "\n";
    return out;
}

inline nlohmann::json state_set_to_json( const state_set& set, const signature& sig )
{
    auto out = nlohmann::json::array();
    set.for_each( [ & ]( state_index s ) { out.push_back( sig.true_fluents( s ) ); } );
    return out;
}

inline state_set state_set_from_json( const nlohmann::json& j, const signature& sig )
{
    if ( j.is_null() )
        return sig.all_states();
    if ( !j.is_array() )
        throw error( "state set must be a JSON array" );
    auto out = sig.no_states();
    for ( const auto& state : j )
    {
        if ( !state.is_array() )
            throw error( "state must be a JSON array of fluent names" );
        out.insert( sig.state_of( state.get<std::vector<std::string>>() ) );
    }
    return out;
}

inline nlohmann::json signature_to_json( const signature& sig )
{
    return { { "fluents", sig.fluents() }, { "actions", sig.actions() } };
}

/// Trajectories, repaired views and the consistency flag. In repaired views a
/// discarded observation (2^F) is written as null.
inline nlohmann::json result_to_json( const evolution_result& res, const signature& sig )
{
    auto trajectories = nlohmann::json::array();
    for ( const auto& t : res.trajectories )
    {
        auto states = nlohmann::json::array();
        for ( const auto& k : t )
            states.push_back( state_set_to_json( k, sig ) );
        trajectories.push_back( std::move( states ) );
    }
    auto repairs = nlohmann::json::array();
    for ( const auto& v : res.repaired_views )
    {
        auto obs = nlohmann::json::array();
        for ( const auto& o : v )
            obs.push_back( o.is_full() ? nlohmann::json( nullptr ) : state_set_to_json( o, sig ) );
        repairs.push_back( std::move( obs ) );
    }
    return { { "consistent", res.was_consistent }, { "trajectories", std::move( trajectories ) },
             { "repairs", std::move( repairs ) } };
}

inline evolution_result result_from_json( const nlohmann::json& j, const signature& sig )
{
    try
    {
        evolution_result res;
        res.was_consistent = j.at( "consistent" ).get<bool>();
        for ( const auto& t : j.at( "trajectories" ) )
        {
            belief_trajectory traj;
            for ( const auto& k : t )
                traj.push_back( state_set_from_json( k, sig ) );
            res.trajectories.push_back( std::move( traj ) );
        }
        for ( const auto& v : j.at( "repairs" ) )
        {
            observation_trajectory obs;
            for ( const auto& o : v )
                obs.push_back( state_set_from_json( o, sig ) );
            res.repaired_views.push_back( std::move( obs ) );
        }
        return res;
    }
    catch ( const nlohmann::json::exception& e )
    {
        throw error( std::string( "malformed result document: " ) + e.what() );
    }
}

inline std::string serialize_result( const evolution_result& res, const signature& sig, output_format format )
{
    if ( format == output_format::machine )
        return result_to_json( res, sig ).dump( 2 ) + "\n";
    if ( res.was_consistent && res.trajectories.size() == 1 )
        return format_trajectory_text( res.trajectories.front(), sig );
    std::string out;
    for ( std::size_t i = 0; i < res.trajectories.size(); ++i )
    {
        out += "trajectory " + std::to_string( i + 1 ) + "\n";
        if ( i < res.repaired_views.size() )
            out += "repair = " + format_observations( res.repaired_views[ i ], sig ) + "\n";
        out += format_trajectory_text( res.trajectories[ i ], sig );
    }
    return out;
}

inline std::string serialize_result( const belief_trajectory& traj, const signature& sig, output_format format )
{
    if ( format == output_format::text )
        return format_trajectory_text( traj, sig );
    auto states = nlohmann::json::array();
    for ( const auto& k : traj )
        states.push_back( state_set_to_json( k, sig ) );
    return nlohmann::json{ { "trajectories", nlohmann::json::array( { std::move( states ) } ) } }.dump( 2 ) + "\n";
}

} // namespace bevo
