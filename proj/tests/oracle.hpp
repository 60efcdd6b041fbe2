#pragma once

// Brute-force reference implementations used to check the library. They
// work from fluent names and the raw transition relation and avoid the
// library's bit tricks, so a shared bug is unlikely.

#include <bevo/bevo.hpp>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace oracle
{

using namespace bevo;

inline std::set<std::string> names_of( const signature& sig, state_index s )
{
    auto v = sig.true_fluents( s );
    return { v.begin(), v.end() };
}

inline std::size_t hamming( const signature& sig, state_index a, state_index b )
{
    auto x = names_of( sig, a );
    auto y = names_of( sig, b );
    std::vector<std::string> diff;
    std::set_symmetric_difference( x.begin(), x.end(), y.begin(), y.end(), std::back_inserter( diff ) );
    return diff.size();
}

inline std::vector<state_index> members( const state_set& s )
{
    std::vector<state_index> out;
    for ( state_index i = 0; i < s.universe(); ++i )
        if ( s.contains( i ) )
            out.push_back( i );
    return out;
}

inline state_set make( std::size_t universe, const std::vector<state_index>& m )
{
    state_set s( universe );
    for ( auto i : m )
        s.insert( i );
    return s;
}

// Dalal revision: members of alpha at least distance from kappa.
inline state_set dalal_revise( const signature& sig, const state_set& kappa, const state_set& alpha )
{
    std::map<state_index, std::size_t> dist;
    for ( auto a : members( alpha ) )
    {
        std::size_t best = 1000;
        for ( auto k : members( kappa ) )
            best = std::min( best, hamming( sig, a, k ) );
        dist[ a ] = best;
    }
    std::size_t lowest = 1000;
    for ( auto& [ s, d ] : dist )
        lowest = std::min( lowest, d );
    state_set out( kappa.universe() );
    for ( auto& [ s, d ] : dist )
        if ( d == lowest )
            out.insert( s );
    return out;
}

using relation_map = std::map<std::pair<state_index, std::uint32_t>, std::set<state_index>>;

inline relation_map relation_of( const transition_system& ts )
{
    relation_map m;
    for ( const auto& t : ts.relation() )
        m[ { t.from, t.action.value } ].insert( t.to );
    return m;
}

inline state_set progress( const transition_system& ts, const state_set& kappa, const action_trajectory& acts )
{
    auto rel = relation_of( ts );
    auto mem = members( kappa );
    std::set<state_index> cur( mem.begin(), mem.end() );
    for ( auto a : acts )
    {
        std::set<state_index> next;
        for ( auto s : cur )
            for ( auto t : rel[ { s, a.value } ] )
                next.insert( t );
        cur = next;
    }
    state_set out( kappa.universe() );
    for ( auto s : cur )
        out.insert( s );
    return out;
}

// Single path from s along a deterministic relation.
inline std::vector<state_index> path( const relation_map& rel, state_index s, const action_trajectory& acts )
{
    std::vector<state_index> out;
    for ( auto a : acts )
    {
        s = *rel.at( { s, a.value } ).begin();
        out.push_back( s );
    }
    return out;
}

inline state_set preimage( const transition_system& ts, const state_set& alpha, const action_trajectory& acts )
{
    auto rel = relation_of( ts );
    state_set out( ts.state_count() );
    for ( state_index s = 0; s < ts.state_count(); ++s )
    {
        auto p = path( rel, s, acts );
        if ( alpha.contains( p.empty() ? s : p.back() ) )
            out.insert( s );
    }
    return out;
}

// Initial states whose run satisfies every observation.
inline state_set explaining_states( const transition_system& ts, const action_trajectory& acts,
                                    const observation_trajectory& obs )
{
    auto rel = relation_of( ts );
    state_set out( ts.state_count() );
    for ( state_index s = 0; s < ts.state_count(); ++s )
    {
        auto p = path( rel, s, acts );
        bool ok = true;
        for ( std::size_t i = 0; i < obs.size(); ++i )
            ok = ok && obs[ i ].contains( p[ i ] );
        if ( ok )
            out.insert( s );
    }
    return out;
}

inline bool consistent( const transition_system& ts, const action_trajectory& acts, const observation_trajectory& obs )
{
    return !explaining_states( ts, acts, obs ).empty();
}

// Pointwise containment of equal-length observation trajectories.
inline bool contained( const observation_trajectory& a, const observation_trajectory& b )
{
    for ( std::size_t i = 0; i < a.size(); ++i )
        if ( !a[ i ].subset_of( b[ i ] ) )
            return false;
    return true;
}

// Every weakening, deduplicated.
inline std::vector<observation_trajectory> weakenings( const observation_trajectory& obs )
{
    std::set<observation_trajectory> out;
    const auto n = obs.size();
    for ( std::uint32_t m = 0; m < ( 1u << n ); ++m )
    {
        auto w = obs;
        for ( std::size_t i = 0; i < n; ++i )
            if ( !( ( m >> i ) & 1u ) )
                w[ i ] = state_set::full( obs[ i ].universe() );
        out.insert( w );
    }
    return { out.begin(), out.end() };
}

// Consistent weakenings with no consistent weakening strictly below them.
inline std::vector<observation_trajectory> candidates( const transition_system& ts, const action_trajectory& acts,
                                                       const observation_trajectory& obs )
{
    auto all = oracle::weakenings( obs );
    std::vector<observation_trajectory> out;
    for ( const auto& w : all )
    {
        if ( !consistent( ts, acts, w ) )
            continue;
        bool minimal = true;
        for ( const auto& v : all )
            if ( v != w && contained( v, w ) && consistent( ts, acts, v ) )
                minimal = false;
        if ( minimal )
            out.push_back( w );
    }
    return out;
}

// second < first in the reliability ordering, read clause by clause.
inline bool less( const observation_trajectory& second, const observation_trajectory& first,
                  const observation_trajectory& obs, const std::vector<int>& r )
{
    std::set<int> levels( r.begin(), r.end() );
    for ( int j : levels )
    {
        bool clause1 = true;
        for ( std::size_t i = 0; i < obs.size(); ++i )
            if ( r[ i ] < j && first[ i ] != second[ i ] )
                clause1 = false;
        bool clause2 = false, clause3 = true;
        for ( std::size_t i = 0; i < obs.size(); ++i )
        {
            if ( r[ i ] != j )
                continue;
            bool sub = second[ i ].subset_of( first[ i ] ) && second[ i ] != first[ i ];
            bool sup = first[ i ].subset_of( second[ i ] ) && first[ i ] != second[ i ];
            clause2 = clause2 || sub;
            if ( sup )
                clause3 = false;
        }
        if ( clause1 && clause2 && clause3 )
            return true;
    }
    return false;
}

inline std::vector<observation_trajectory> repairs( const transition_system& ts, const action_trajectory& acts,
                                                    const observation_trajectory& obs, const std::vector<int>& r )
{
    auto cands = candidates( ts, acts, obs );
    std::vector<observation_trajectory> out;
    for ( const auto& c : cands )
    {
        bool beaten = false;
        for ( const auto& d : cands )
            if ( less( d, c, obs, r ) )
                beaten = true;
        if ( !beaten )
            out.push_back( c );
    }
    std::sort( out.begin(), out.end() );
    return out;
}

// Belief trajectory for a consistent world view, with Dalal revision.
inline belief_trajectory evolve_dalal( const transition_system& ts, const state_set& kappa, const action_trajectory& acts,
                                       const observation_trajectory& obs )
{
    auto start = dalal_revise( ts.sig(), kappa, explaining_states( ts, acts, obs ) );
    belief_trajectory out{ start };
    for ( std::size_t i = 0; i < acts.size(); ++i )
        out.push_back( progress( ts, out.back(), { acts[ i ] } ) );
    return out;
}

inline state_set random_set( std::mt19937_64& rng, std::size_t universe, bool nonempty )
{
    for ( ;; )
    {
        state_set s( universe );
        for ( state_index i = 0; i < universe; ++i )
            if ( rng() & 1u )
                s.insert( i );
        if ( !nonempty || !s.empty() )
            return s;
    }
}

// Random deterministic system over fluents p, q, ... with actions a and b.
inline transition_system random_system( std::mt19937_64& rng, std::size_t fluents, bool deterministic = true )
{
    signature sig( fluent_names( fluents ), { "a", "b" } );
    std::vector<transition> rel;
    for ( std::uint32_t a = 0; a < 2; ++a )
        for ( state_index s = 0; s < sig.state_count(); ++s )
        {
            if ( rng() % 4 == 0 )
                continue; // left to self-loop completion
            std::size_t k = deterministic ? 1 : 1 + rng() % 2;
            for ( std::size_t j = 0; j < k; ++j )
                rel.push_back( { s, action_id{ a }, static_cast<state_index>( rng() % sig.state_count() ) } );
        }
    return complete_transitions( sig, rel );
}

} // namespace oracle
