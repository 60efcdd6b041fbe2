#pragma once

#include "kernel.hpp"

#include <memory>
#include <string>

namespace bevo
{

// Propositional formula over fluent atoms. Nodes are immutable and shared.
class formula
{
public:
    enum class kind
    {
        atom,
        negation,
        conjunction,
        disjunction,
        implication,
        equivalence
    };

    static formula atom( std::string name ) { return formula( kind::atom, std::move( name ), nullptr, nullptr ); }
    static formula negation( formula f ) { return unary( kind::negation, std::move( f ) ); }
    static formula conjunction( formula a, formula b ) { return binary( kind::conjunction, std::move( a ), std::move( b ) ); }
    static formula disjunction( formula a, formula b ) { return binary( kind::disjunction, std::move( a ), std::move( b ) ); }
    static formula implication( formula a, formula b ) { return binary( kind::implication, std::move( a ), std::move( b ) ); }
    static formula equivalence( formula a, formula b ) { return binary( kind::equivalence, std::move( a ), std::move( b ) ); }

    [[nodiscard]] kind op() const { return _kind; }
    [[nodiscard]] const std::string& name() const { return _name; }
    [[nodiscard]] const formula& lhs() const { return *_lhs; }
    [[nodiscard]] const formula& rhs() const { return *_rhs; }

    [[nodiscard]] bool eval( const signature& sig, state_index s ) const
    {
        switch ( _kind )
        {
        case kind::atom: return sig.holds( s, sig.fluent( _name ) );
        case kind::negation: return !_lhs->eval( sig, s );
        case kind::conjunction: return _lhs->eval( sig, s ) && _rhs->eval( sig, s );
        case kind::disjunction: return _lhs->eval( sig, s ) || _rhs->eval( sig, s );
        case kind::implication: return !_lhs->eval( sig, s ) || _rhs->eval( sig, s );
        case kind::equivalence: return _lhs->eval( sig, s ) == _rhs->eval( sig, s );
        }
        return false;
    }

    /// Throws if an atom is not a fluent of sig.
    void check_atoms( const signature& sig ) const
    {
        if ( _kind == kind::atom )
            (void)sig.fluent( _name );
        if ( _lhs )
            _lhs->check_atoms( sig );
        if ( _rhs )
            _rhs->check_atoms( sig );
    }

    /// Fully parenthesised rendering in the DSL's concrete syntax.
    [[nodiscard]] std::string to_string() const
    {
        switch ( _kind )
        {
        case kind::atom: return _name;
        case kind::negation: return "!" + _lhs->to_string();
        case kind::conjunction: return "(" + _lhs->to_string() + " & " + _rhs->to_string() + ")";
        case kind::disjunction: return "(" + _lhs->to_string() + " | " + _rhs->to_string() + ")";
        case kind::implication: return "(" + _lhs->to_string() + " -> " + _rhs->to_string() + ")";
        case kind::equivalence: return "(" + _lhs->to_string() + " <-> " + _rhs->to_string() + ")";
        }
        return {};
    }

private:
    formula( kind k, std::string name, std::shared_ptr<const formula> lhs, std::shared_ptr<const formula> rhs )
            : _kind{ k }, _name{ std::move( name ) }, _lhs{ std::move( lhs ) }, _rhs{ std::move( rhs ) }
    {
    }

    static formula unary( kind k, formula f )
    {
        return formula( k, {}, std::make_shared<const formula>( std::move( f ) ), nullptr );
    }

    static formula binary( kind k, formula a, formula b )
    {
        return formula( k, {}, std::make_shared<const formula>( std::move( a ) ),
                        std::make_shared<const formula>( std::move( b ) ) );
    }

    kind _kind;
    std::string _name;
    std::shared_ptr<const formula> _lhs;
    std::shared_ptr<const formula> _rhs;
};

/// |phi|: every state of sig satisfying phi.
inline state_set models( const formula& phi, const signature& sig )
{
    phi.check_atoms( sig );
    state_set out = sig.no_states();
    for ( state_index s = 0; s < sig.state_count(); ++s )
        if ( phi.eval( sig, s ) )
            out.insert( s );
    return out;
}

} // namespace bevo
