#pragma once

// Belief update as action progression.

#include "kernel.hpp"

#include <span>
#include <vector>

namespace bevo
{

using action_trajectory = std::vector<action_id>;

/// kappa <> A: every state some member of kappa can reach by A.
inline state_set update( const state_set& kappa, action_id a, const transition_system& ts )
{
    ts.sig().check_action( a );
    if ( kappa.universe() != ts.state_count() )
        throw error( "belief state and transition system use different signatures" );
    state_set out( ts.state_count() );
    kappa.for_each( [ & ]( state_index s ) {
        for ( auto t : ts.successors( s, a ) )
            out.insert( t );
    } );
    return out;
}

inline state_set update_seq( const state_set& kappa, std::span<const action_id> actions, const transition_system& ts )
{
    state_set out = kappa;
    for ( auto a : actions )
        out = update( out, a, ts );
    if ( actions.empty() && kappa.universe() != ts.state_count() )
        throw error( "belief state and transition system use different signatures" );
    return out;
}

/// States reachable from s along the action sequence.
inline state_set successor( state_index s, std::span<const action_id> actions, const transition_system& ts )
{
    state_set start( ts.state_count() );
    start.insert( s );
    return update_seq( start, actions, ts );
}

} // namespace bevo
