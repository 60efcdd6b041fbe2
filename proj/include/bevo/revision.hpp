#pragma once

// AGM revision over state sets via faithful rankings, with the Hamming
// (Dalal) ranking as the default, plus rankings shifted through an action and
// the combined update-then-revise operator they induce.

#include "kernel.hpp"
#include "update.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <limits>
#include <vector>

namespace bevo
{

using rank_t = std::uint32_t;

// Total pre-order over all states, given as a rank per state (lower is more
// plausible), together with the belief state it is meant to be faithful to.
// Construction does not validate faithfulness; see check_faithful.
class faithful_ranking
{
public:
    faithful_ranking( state_set base, std::vector<rank_t> ranks ) : _base{ std::move( base ) }, _ranks{ std::move( ranks ) }
    {
        if ( _ranks.size() != _base.universe() )
            throw error( "ranking must assign a rank to every state" );
    }

    [[nodiscard]] const state_set& base() const { return _base; }
    [[nodiscard]] rank_t rank( state_index s ) const { return _ranks.at( s ); }
    [[nodiscard]] std::span<const rank_t> ranks() const { return _ranks; }
    [[nodiscard]] std::size_t universe() const { return _base.universe(); }

    friend bool operator==( const faithful_ranking&, const faithful_ranking& ) = default;

private:
    state_set _base;
    std::vector<rank_t> _ranks;
};

/// Members of the base share one rank and sit strictly below every non-member.
inline bool check_faithful( const faithful_ranking& r )
{
    const auto& base = r.base();
    std::optional<rank_t> member_rank;
    rank_t worst_member = 0;
    bool ok = true;
    base.for_each( [ & ]( state_index s ) {
        if ( member_rank && *member_rank != r.rank( s ) )
            ok = false;
        member_rank = r.rank( s );
        worst_member = std::max( worst_member, r.rank( s ) );
    } );
    if ( !ok )
        return false;
    if ( !member_rank )
        return true;
    for ( state_index s = 0; s < r.universe(); ++s )
        if ( !base.contains( s ) && r.rank( s ) <= worst_member )
            return false;
    return true;
}

/// rank(s) = min Hamming distance from s to a member of kappa.
inline faithful_ranking dalal_ranking( const state_set& kappa )
{
    if ( kappa.empty() )
        throw error( "cannot rank against an empty belief state" );
    std::vector<rank_t> ranks( kappa.universe(), std::numeric_limits<rank_t>::max() );
    kappa.for_each( [ & ]( state_index k ) {
        for ( state_index s = 0; s < ranks.size(); ++s )
            ranks[ s ] = std::min( ranks[ s ], static_cast<rank_t>( std::popcount( s ^ k ) ) );
    } );
    return faithful_ranking( kappa, std::move( ranks ) );
}

/// Rule producing a ranking faithful to any non-empty belief state.
using ranking_assignment = std::function<faithful_ranking( const state_set& )>;

inline ranking_assignment dalal_assignment()
{
    return []( const state_set& kappa ) { return dalal_ranking( kappa ); };
}

/// Explicit rank tables, one per belief state. Each table is validated up front;
/// revising a belief state with no table is an error.
inline ranking_assignment table_assignment( std::vector<faithful_ranking> tables )
{
    for ( std::size_t i = 0; i < tables.size(); ++i )
    {
        if ( tables[ i ].base().empty() )
            throw error( "ranking table has an empty base" );
        if ( !check_faithful( tables[ i ] ) )
            throw error( "ranking table is not faithful to its base" );
        for ( std::size_t j = 0; j < i; ++j )
            if ( tables[ j ].base() == tables[ i ].base() )
                throw error( "two ranking tables share the same base" );
    }
    return [ tables = std::move( tables ) ]( const state_set& kappa ) {
        for ( const auto& t : tables )
            if ( t.base() == kappa )
                return t;
        throw error( "no ranking table is given for this belief state" );
    };
}

namespace detail
{
template <typename RankFn>
state_set min_by_rank( const state_set& candidates, RankFn&& rank )
{
    state_set out( candidates.universe() );
    auto best = std::numeric_limits<rank_t>::max();
    candidates.for_each( [ & ]( state_index s ) { best = std::min( best, rank( s ) ); } );
    candidates.for_each( [ & ]( state_index s ) {
        if ( rank( s ) == best )
            out.insert( s );
    } );
    return out;
}
} // namespace detail

/// The minimal members of alpha under r. Ties are kept.
inline state_set min_states( const state_set& alpha, const faithful_ranking& r )
{
    return detail::min_by_rank( alpha, [ & ]( state_index s ) { return r.rank( s ); } );
}

/// kappa * alpha = min(alpha, <=_kappa). Revising by the empty set yields it.
inline state_set revise( const state_set& kappa, const state_set& alpha, const ranking_assignment& assign )
{
    if ( kappa.empty() )
        throw error( "cannot revise an empty belief state" );
    if ( kappa.universe() != alpha.universe() )
        throw error( "belief state and observation use different signatures" );
    return min_states( alpha, assign( kappa ) );
}

// A faithful ranking pushed forward through one action. Only states with a
// predecessor under that action are ranked.
class shifted_ranking
{
public:
    shifted_ranking( state_set domain, std::vector<rank_t> ranks, action_id action )
            : _domain{ std::move( domain ) }, _ranks{ std::move( ranks ) }, _action{ action }
    {
    }

    [[nodiscard]] const state_set& domain() const { return _domain; }
    [[nodiscard]] bool defined( state_index s ) const { return _domain.contains( s ); }
    [[nodiscard]] rank_t rank( state_index s ) const
    {
        if ( !defined( s ) )
            throw error( "shifted ranking is undefined on a state with no predecessor" );
        return _ranks[ s ];
    }
    [[nodiscard]] action_id action() const { return _action; }

private:
    state_set _domain;
    std::vector<rank_t> _ranks;
    action_id _action;
};

/// rank'(s') = min rank of an A-predecessor of s'.
inline shifted_ranking shift_ranking( const faithful_ranking& r, action_id a, const transition_system& ts )
{
    ts.require_deterministic();
    ts.sig().check_action( a );
    if ( r.universe() != ts.state_count() )
        throw error( "ranking and transition system use different signatures" );
    std::vector<rank_t> ranks( r.universe(), std::numeric_limits<rank_t>::max() );
    state_set domain( r.universe() );
    for ( state_index t = 0; t < r.universe(); ++t )
    {
        auto s = ts.successor( t, a );
        domain.insert( s );
        ranks[ s ] = std::min( ranks[ s ], r.rank( t ) );
    }
    return shifted_ranking( std::move( domain ), std::move( ranks ), a );
}

/// Minimal members of alpha among the states the shifted ranking is defined on.
inline state_set min_states( const state_set& alpha, const shifted_ranking& r )
{
    return detail::min_by_rank( alpha & r.domain(), [ & ]( state_index s ) { return r.rank( s ); } );
}

/// One action followed by one observation, answered by the shifted ranking when
/// alpha is reachable by the action and by plain update otherwise.
inline state_set combined_change( const state_set& kappa, action_id a, const state_set& alpha,
                                  const ranking_assignment& assign, const transition_system& ts )
{
    ts.require_deterministic();
    if ( kappa.empty() )
        throw error( "cannot revise an empty belief state" );
    auto reachable = update( ts.sig().all_states(), a, ts );
    if ( !reachable.intersects( alpha ) )
        return update( kappa, a, ts );
    return min_states( alpha, shift_ranking( assign( kappa ), a, ts ) );
}

} // namespace bevo
