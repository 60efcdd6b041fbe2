#pragma once

// Signatures, states, state sets and transition systems.
//
// A state is a truth assignment over the signature's fluents and is identified
// with its canonical index: bit k of the index is the value of the k-th fluent
// in declaration order. Belief states and observations are both state sets.

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bevo
{

class error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Raised by operations that are only defined over deterministic systems.
class nondeterministic_error : public error
{
public:
    using error::error;
};

using state_index = std::uint32_t;

inline constexpr std::size_t max_fluents = 16;
inline constexpr std::string_view null_action_name = "lambda";

struct action_id
{
    std::uint32_t value = 0;

    friend auto operator<=>( const action_id&, const action_id& ) = default;
};

// Set of states over a universe of 2^|F| canonical indices, stored as a bitset.
class state_set
{
public:
    state_set() = default;
    explicit state_set( std::size_t universe ) : _universe{ universe }, _words( word_count( universe ), 0 ) {}

    state_set( std::size_t universe, std::initializer_list<state_index> members ) : state_set( universe )
    {
        for ( auto s : members )
            insert( s );
    }

    static state_set full( std::size_t universe )
    {
        state_set all( universe );
        std::fill( all._words.begin(), all._words.end(), ~std::uint64_t{ 0 } );
        all.trim();
        return all;
    }

    [[nodiscard]] std::size_t universe() const { return _universe; }

    [[nodiscard]] bool contains( state_index s ) const
    {
        return s < _universe && ( ( _words[ s / 64 ] >> ( s % 64 ) ) & 1u ) != 0;
    }

    void insert( state_index s )
    {
        check_member( s );
        _words[ s / 64 ] |= std::uint64_t{ 1 } << ( s % 64 );
    }

    void erase( state_index s )
    {
        check_member( s );
        _words[ s / 64 ] &= ~( std::uint64_t{ 1 } << ( s % 64 ) );
    }

    [[nodiscard]] bool empty() const
    {
        return std::all_of( _words.begin(), _words.end(), []( auto w ) { return w == 0; } );
    }

    [[nodiscard]] std::size_t size() const
    {
        std::size_t n = 0;
        for ( auto w : _words )
            n += static_cast<std::size_t>( std::popcount( w ) );
        return n;
    }

    [[nodiscard]] bool is_full() const { return size() == _universe; }

    template <typename F>
    void for_each( F&& fn ) const
    {
        for ( std::size_t i = 0; i < _words.size(); ++i )
        {
            auto w = _words[ i ];
            while ( w != 0 )
            {
                auto bit = static_cast<std::size_t>( std::countr_zero( w ) );
                fn( static_cast<state_index>( i * 64 + bit ) );
                w &= w - 1;
            }
        }
    }

    /// Members in ascending index order.
    [[nodiscard]] std::vector<state_index> members() const
    {
        std::vector<state_index> out;
        out.reserve( size() );
        for_each( [ & ]( state_index s ) { out.push_back( s ); } );
        return out;
    }

    [[nodiscard]] state_set complement() const
    {
        state_set out( _universe );
        for ( std::size_t i = 0; i < _words.size(); ++i )
            out._words[ i ] = ~_words[ i ];
        out.trim();
        return out;
    }

    [[nodiscard]] bool subset_of( const state_set& other ) const
    {
        check_same( other );
        for ( std::size_t i = 0; i < _words.size(); ++i )
            if ( ( _words[ i ] & ~other._words[ i ] ) != 0 )
                return false;
        return true;
    }

    [[nodiscard]] bool intersects( const state_set& other ) const
    {
        check_same( other );
        for ( std::size_t i = 0; i < _words.size(); ++i )
            if ( ( _words[ i ] & other._words[ i ] ) != 0 )
                return true;
        return false;
    }

    state_set& operator|=( const state_set& other )
    {
        check_same( other );
        for ( std::size_t i = 0; i < _words.size(); ++i )
            _words[ i ] |= other._words[ i ];
        return *this;
    }

    state_set& operator&=( const state_set& other )
    {
        check_same( other );
        for ( std::size_t i = 0; i < _words.size(); ++i )
            _words[ i ] &= other._words[ i ];
        return *this;
    }

    state_set& operator-=( const state_set& other )
    {
        check_same( other );
        for ( std::size_t i = 0; i < _words.size(); ++i )
            _words[ i ] &= ~other._words[ i ];
        return *this;
    }

    friend state_set operator|( state_set a, const state_set& b ) { return a |= b; }
    friend state_set operator&( state_set a, const state_set& b ) { return a &= b; }
    friend state_set operator-( state_set a, const state_set& b ) { return a -= b; }

    friend bool operator==( const state_set&, const state_set& ) = default;

    // Canonical order: lexicographic over the ascending member lists.
    friend std::strong_ordering operator<=>( const state_set& a, const state_set& b )
    {
        if ( auto c = a._universe <=> b._universe; c != 0 )
            return c;
        auto am = a.members();
        auto bm = b.members();
        return std::lexicographical_compare_three_way( am.begin(), am.end(), bm.begin(), bm.end() );
    }

    [[nodiscard]] std::span<const std::uint64_t> words() const { return _words; }

private:
    static std::size_t word_count( std::size_t universe ) { return ( universe + 63 ) / 64; }

    void trim()
    {
        if ( auto tail = _universe % 64; tail != 0 )
            _words.back() &= ( std::uint64_t{ 1 } << tail ) - 1;
    }

    void check_member( state_index s ) const
    {
        if ( s >= _universe )
            throw error( "state index " + std::to_string( s ) + " outside universe of " +
                         std::to_string( _universe ) + " states" );
    }

    void check_same( const state_set& other ) const
    {
        if ( _universe != other._universe )
            throw error( "state sets over different signatures" );
    }

    std::size_t _universe = 0;
    std::vector<std::uint64_t> _words;
};

[[nodiscard]] inline bool is_identifier( std::string_view name )
{
    auto head = []( char c ) { return ( c >= 'a' && c <= 'z' ) || ( c >= 'A' && c <= 'Z' ) || c == '_'; };
    auto tail = [ & ]( char c ) { return head( c ) || ( c >= '0' && c <= '9' ); };
    return !name.empty() && head( name.front() ) && std::all_of( name.begin() + 1, name.end(), tail );
}

class signature
{
public:
    signature( std::vector<std::string> fluents, std::vector<std::string> actions )
            : _fluents{ std::move( fluents ) }, _actions{ std::move( actions ) }
    {
        if ( _fluents.empty() )
            throw error( "signature needs at least one fluent" );
        if ( _fluents.size() > max_fluents )
            throw error( "at most " + std::to_string( max_fluents ) + " fluents are supported" );
        check_names( _fluents, "fluent" );
        if ( std::find( _actions.begin(), _actions.end(), null_action_name ) == _actions.end() )
            _actions.emplace_back( null_action_name );
        check_names( _actions, "action" );
        for ( const auto& f : _fluents )
            if ( f == null_action_name )
                throw error( "'" + f + "' is reserved for the null action" );
    }

    [[nodiscard]] const std::vector<std::string>& fluents() const { return _fluents; }
    [[nodiscard]] const std::vector<std::string>& actions() const { return _actions; }
    [[nodiscard]] std::size_t fluent_count() const { return _fluents.size(); }
    [[nodiscard]] std::size_t state_count() const { return std::size_t{ 1 } << _fluents.size(); }

    [[nodiscard]] std::optional<std::size_t> find_fluent( std::string_view name ) const
    {
        auto it = std::find( _fluents.begin(), _fluents.end(), name );
        if ( it == _fluents.end() )
            return std::nullopt;
        return static_cast<std::size_t>( it - _fluents.begin() );
    }

    [[nodiscard]] std::size_t fluent( std::string_view name ) const
    {
        if ( auto k = find_fluent( name ) )
            return *k;
        throw error( "unknown fluent '" + std::string( name ) + "'" );
    }

    [[nodiscard]] std::optional<action_id> find_action( std::string_view name ) const
    {
        auto it = std::find( _actions.begin(), _actions.end(), name );
        if ( it == _actions.end() )
            return std::nullopt;
        return action_id{ static_cast<std::uint32_t>( it - _actions.begin() ) };
    }

    [[nodiscard]] action_id action( std::string_view name ) const
    {
        if ( auto a = find_action( name ) )
            return *a;
        throw error( "unknown action '" + std::string( name ) + "'" );
    }

    [[nodiscard]] const std::string& action_name( action_id a ) const
    {
        check_action( a );
        return _actions[ a.value ];
    }

    [[nodiscard]] action_id null_action() const { return action( null_action_name ); }

    void check_action( action_id a ) const
    {
        if ( a.value >= _actions.size() )
            throw error( "unknown action id " + std::to_string( a.value ) );
    }

    [[nodiscard]] bool holds( state_index s, std::size_t fluent ) const { return ( ( s >> fluent ) & 1u ) != 0; }

    [[nodiscard]] state_index state_of( std::span<const std::string> true_fluents ) const
    {
        state_index s = 0;
        for ( const auto& name : true_fluents )
            s |= state_index{ 1 } << fluent( name );
        return s;
    }

    [[nodiscard]] std::vector<std::string> true_fluents( state_index s ) const
    {
        std::vector<std::string> out;
        for ( std::size_t k = 0; k < _fluents.size(); ++k )
            if ( holds( s, k ) )
                out.push_back( _fluents[ k ] );
        return out;
    }

    [[nodiscard]] state_set no_states() const { return state_set( state_count() ); }
    [[nodiscard]] state_set all_states() const { return state_set::full( state_count() ); }

    friend bool operator==( const signature&, const signature& ) = default;

private:
    static void check_names( const std::vector<std::string>& names, const char* kind )
    {
        for ( std::size_t i = 0; i < names.size(); ++i )
        {
            if ( !is_identifier( names[ i ] ) )
                throw error( std::string( "invalid " ) + kind + " name '" + names[ i ] + "'" );
            for ( std::size_t j = 0; j < i; ++j )
                if ( names[ i ] == names[ j ] )
                    throw error( std::string( "duplicate " ) + kind + " name '" + names[ i ] + "'" );
        }
    }

    std::vector<std::string> _fluents;
    std::vector<std::string> _actions;
};

inline signature make_signature( std::vector<std::string> fluents, std::vector<std::string> actions )
{
    return signature( std::move( fluents ), std::move( actions ) );
}

struct transition
{
    state_index from = 0;
    action_id action;
    state_index to = 0;

    friend auto operator<=>( const transition&, const transition& ) = default;
};

enum class completion
{
    self_loops, // unlisted (state, action) pairs stay put
    strict      // every non-null (state, action) pair must be listed
};

class transition_system
{
public:
    [[nodiscard]] const signature& sig() const { return _sig; }
    [[nodiscard]] std::size_t state_count() const { return _sig.state_count(); }
    [[nodiscard]] bool deterministic() const { return _deterministic; }

    [[nodiscard]] std::span<const state_index> successors( state_index s, action_id a ) const
    {
        _sig.check_action( a );
        return _succ[ a.value ][ s ];
    }

    /// The unique successor; only valid on deterministic systems.
    [[nodiscard]] state_index successor( state_index s, action_id a ) const { return successors( s, a ).front(); }

    void require_deterministic() const
    {
        if ( !_deterministic )
            throw nondeterministic_error( "operation requires a deterministic transition system" );
    }

    /// Every triple of the completed relation, sorted.
    [[nodiscard]] std::vector<transition> relation() const
    {
        std::vector<transition> out;
        for ( std::uint32_t a = 0; a < _succ.size(); ++a )
            for ( state_index s = 0; s < _succ[ a ].size(); ++s )
                for ( auto t : _succ[ a ][ s ] )
                    out.push_back( { s, action_id{ a }, t } );
        std::sort( out.begin(), out.end() );
        return out;
    }

    friend bool operator==( const transition_system&, const transition_system& ) = default;

    friend transition_system complete_transitions( const signature& sig, std::span<const transition> partial,
                                                   completion mode );

private:
    explicit transition_system( signature sig ) : _sig{ std::move( sig ) } {}

    signature _sig;
    std::vector<std::vector<std::vector<state_index>>> _succ; // [action][state] -> sorted successors
    bool _deterministic = true;
};

/// Total system from a partial relation: unlisted pairs get self-loops (or are
/// rejected in strict mode) and the null action is the identity.
inline transition_system complete_transitions( const signature& sig, std::span<const transition> partial,
                                               completion mode = completion::self_loops )
{
    transition_system ts( sig );
    const auto n = sig.state_count();
    const auto null = sig.null_action();
    ts._succ.assign( sig.actions().size(), std::vector<std::vector<state_index>>( n ) );

    for ( const auto& t : partial )
    {
        sig.check_action( t.action );
        if ( t.from >= n || t.to >= n )
            throw error( "transition names a state outside the signature" );
        if ( t.action == null && t.from != t.to )
            throw error( "explicit non-identity transition for the null action" );
        ts._succ[ t.action.value ][ t.from ].push_back( t.to );
    }

    for ( std::uint32_t a = 0; a < ts._succ.size(); ++a )
    {
        for ( state_index s = 0; s < n; ++s )
        {
            auto& succ = ts._succ[ a ][ s ];
            if ( succ.empty() )
            {
                if ( mode == completion::strict && action_id{ a } != null )
                    throw error( "strict domain: no transition for action '" + sig.actions()[ a ] + "' from state " +
                                 std::to_string( s ) );
                succ.push_back( s );
            }
            std::sort( succ.begin(), succ.end() );
            succ.erase( std::unique( succ.begin(), succ.end() ), succ.end() );
            if ( succ.size() != 1 )
                ts._deterministic = false;
        }
    }
    return ts;
}

inline bool is_deterministic( const transition_system& ts ) { return ts.deterministic(); }

} // namespace bevo
