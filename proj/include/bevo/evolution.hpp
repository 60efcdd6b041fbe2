#pragma once

// Belief evolution: every observation is traced back through the actions that
// preceded it to a condition on the initial belief state, the initial state is
// revised once by the conjunction of those conditions, and the actions are then
// replayed. Observation histories that no initial state can explain are
// repaired by discarding observations, keeping a containment-maximal and
// most-reliable subset.

#include "kernel.hpp"
#include "revision.hpp"
#include "update.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <iterator>
#include <numeric>
#include <vector>

namespace bevo
{

/// Raised when an operation requires a world view that is consistent.
class inconsistent_view_error : public error
{
public:
    using error::error;
};

using observation_trajectory = std::vector<state_set>; // alpha_1 .. alpha_n
using belief_trajectory = std::vector<state_set>;      // kappa_0 .. kappa_n

/// Most observations a repair search will consider (2^n weakenings).
inline constexpr std::size_t max_repair_positions = 20;

class world_view
{
public:
    world_view( action_trajectory actions, observation_trajectory observations )
            : _actions{ std::move( actions ) }, _observations{ std::move( observations ) }
    {
        if ( _actions.empty() )
            throw error( "a world view needs at least one action/observation pair" );
        if ( _actions.size() != _observations.size() )
            throw error( "action and observation trajectories differ in length" );
        for ( const auto& o : _observations )
            if ( o.universe() != _observations.front().universe() )
                throw error( "observations use different signatures" );
    }

    [[nodiscard]] const action_trajectory& actions() const { return _actions; }
    [[nodiscard]] const observation_trajectory& observations() const { return _observations; }
    [[nodiscard]] std::size_t size() const { return _actions.size(); }

    friend bool operator==( const world_view&, const world_view& ) = default;

private:
    action_trajectory _actions;
    observation_trajectory _observations;
};

// Reliability of observation positions: a lower value is more reliable.
class reliability
{
public:
    enum class kind
    {
        recency,  // r(alpha_i) = -i
        constant, // every observation equally reliable
        weights   // explicit value per position
    };

    static reliability recency() { return reliability( kind::recency, {} ); }
    static reliability constant() { return reliability( kind::constant, {} ); }
    static reliability weights( std::vector<int> w ) { return reliability( kind::weights, std::move( w ) ); }

    [[nodiscard]] kind type() const { return _kind; }
    [[nodiscard]] const std::vector<int>& explicit_weights() const { return _weights; }

    /// Values for positions 1..n, returned 0-based.
    [[nodiscard]] std::vector<int> values( std::size_t n ) const
    {
        switch ( _kind )
        {
        case kind::recency:
        {
            std::vector<int> v( n );
            for ( std::size_t i = 0; i < n; ++i )
                v[ i ] = -static_cast<int>( i + 1 );
            return v;
        }
        case kind::constant: return std::vector<int>( n, 0 );
        case kind::weights:
            if ( _weights.size() != n )
                throw error( "reliability weights give " + std::to_string( _weights.size() ) + " values for " +
                             std::to_string( n ) + " observations" );
            return _weights;
        }
        return {};
    }

    friend bool operator==( const reliability&, const reliability& ) = default;

private:
    reliability( kind k, std::vector<int> w ) : _kind{ k }, _weights{ std::move( w ) } {}

    kind _kind;
    std::vector<int> _weights;
};

struct evolution_result
{
    std::vector<belief_trajectory> trajectories;
    std::vector<observation_trajectory> repaired_views; // parallel to trajectories
    bool was_consistent = false;

    friend bool operator==( const evolution_result&, const evolution_result& ) = default;
};

/// States from which the action sequence ends inside alpha.
inline state_set preimage( const state_set& alpha, std::span<const action_id> actions, const transition_system& ts )
{
    ts.require_deterministic();
    if ( alpha.universe() != ts.state_count() )
        throw error( "observation and transition system use different signatures" );
    state_set out( ts.state_count() );
    for ( state_index s = 0; s < ts.state_count(); ++s )
    {
        auto cur = s;
        for ( auto a : actions )
            cur = ts.successor( cur, a );
        if ( alpha.contains( cur ) )
            out.insert( s );
    }
    return out;
}

namespace detail
{

// Pre-image of each observation along its action prefix, in one pass per state.
inline std::vector<state_set> observation_preimages( const world_view& w, const transition_system& ts )
{
    ts.require_deterministic();
    const auto n = w.size();
    if ( w.observations().front().universe() != ts.state_count() )
        throw error( "world view and transition system use different signatures" );
    for ( auto a : w.actions() )
        ts.sig().check_action( a );
    std::vector<state_set> pre( n, state_set( ts.state_count() ) );
    for ( state_index s = 0; s < ts.state_count(); ++s )
    {
        auto cur = s;
        for ( std::size_t i = 0; i < n; ++i )
        {
            cur = ts.successor( cur, w.actions()[ i ] );
            if ( w.observations()[ i ].contains( cur ) )
                pre[ i ].insert( s );
        }
    }
    return pre;
}

inline state_set intersect_all( const std::vector<state_set>& sets, std::size_t universe )
{
    auto out = state_set::full( universe );
    for ( const auto& s : sets )
        out &= s;
    return out;
}

using retained_mask = std::uint32_t;

// Repair search over the informative positions of an observation trajectory,
// i.e. those whose observation is not the vacuous 2^F. Bit j of a mask says
// whether informative position j is retained.
class repair_problem
{
public:
    repair_problem( const observation_trajectory& observations, std::vector<state_set> preimages,
                    std::size_t universe )
            : _observations{ observations }, _preimages{ std::move( preimages ) }, _universe{ universe }
    {
        for ( std::size_t i = 0; i < observations.size(); ++i )
            if ( !observations[ i ].is_full() )
                _informative.push_back( i );
        if ( _informative.size() > max_repair_positions )
            throw error( "repair search limited to " + std::to_string( max_repair_positions ) +
                         " informative observations" );
    }

    [[nodiscard]] const std::vector<std::size_t>& informative() const { return _informative; }
    [[nodiscard]] retained_mask all_retained() const
    {
        return static_cast<retained_mask>( ( std::uint64_t{ 1 } << _informative.size() ) - 1 );
    }

    /// Intersection of the pre-images of every retained observation.
    [[nodiscard]] state_set condition( retained_mask m ) const
    {
        auto out = state_set::full( _universe );
        for ( std::size_t j = 0; j < _informative.size(); ++j )
            if ( ( m >> j ) & 1u )
                out &= _preimages[ _informative[ j ] ];
        return out;
    }

    [[nodiscard]] bool consistent( retained_mask m ) const { return !condition( m ).empty(); }

    [[nodiscard]] observation_trajectory view( retained_mask m ) const
    {
        auto out = _observations;
        for ( std::size_t j = 0; j < _informative.size(); ++j )
            if ( !( ( m >> j ) & 1u ) )
                out[ _informative[ j ] ] = state_set::full( _universe );
        return out;
    }

    // Consistent masks with no consistent strict superset. Masks are visited by
    // decreasing popcount, so any subset of an already accepted mask is skipped.
    [[nodiscard]] std::vector<retained_mask> maximal_consistent() const
    {
        const auto k = _informative.size();
        std::vector<retained_mask> order( std::size_t{ 1 } << k );
        std::iota( order.begin(), order.end(), retained_mask{ 0 } );
        std::stable_sort( order.begin(), order.end(),
                          []( auto a, auto b ) { return std::popcount( a ) > std::popcount( b ); } );
        std::vector<retained_mask> found;
        for ( auto m : order )
        {
            bool dominated = std::any_of( found.begin(), found.end(), [ m ]( auto f ) { return ( m & ~f ) == 0; } );
            if ( !dominated && consistent( m ) )
                found.push_back( m );
        }
        return found;
    }

    // a < b in the reliability ordering: at the most reliable level where they
    // differ, a retains strictly more than b.
    [[nodiscard]] bool more_reliable( retained_mask a, retained_mask b, const std::vector<int>& r ) const
    {
        std::vector<int> levels;
        for ( auto i : _informative )
            levels.push_back( r[ i ] );
        std::sort( levels.begin(), levels.end() );
        levels.erase( std::unique( levels.begin(), levels.end() ), levels.end() );
        for ( auto level : levels )
        {
            retained_mask at_level = 0;
            for ( std::size_t j = 0; j < _informative.size(); ++j )
                if ( r[ _informative[ j ] ] == level )
                    at_level |= retained_mask{ 1 } << j;
            auto only_a = a & ~b & at_level;
            auto only_b = b & ~a & at_level;
            if ( only_a == 0 && only_b == 0 )
                continue;
            return only_a != 0 && only_b == 0;
        }
        return false;
    }

    [[nodiscard]] std::vector<retained_mask> repairs( const std::vector<int>& r ) const
    {
        auto candidates = maximal_consistent();
        std::vector<retained_mask> out;
        for ( auto m : candidates )
        {
            bool beaten = std::any_of( candidates.begin(), candidates.end(),
                                       [ & ]( auto other ) { return more_reliable( other, m, r ); } );
            if ( !beaten )
                out.push_back( m );
        }
        return out;
    }

private:
    observation_trajectory _observations;
    std::vector<state_set> _preimages;
    std::vector<std::size_t> _informative;
    std::size_t _universe = 0;
};

inline std::vector<observation_trajectory> sorted_views( const repair_problem& p,
                                                         const std::vector<retained_mask>& masks )
{
    std::vector<observation_trajectory> out;
    for ( auto m : masks )
        out.push_back( p.view( m ) );
    std::sort( out.begin(), out.end() );
    return out;
}

} // namespace detail

/// Some non-empty initial belief state explains every observation.
inline bool consistent( const world_view& w, const transition_system& ts )
{
    auto pre = detail::observation_preimages( w, ts );
    return !detail::intersect_all( pre, ts.state_count() ).empty();
}

inline belief_trajectory evolve_consistent( const state_set& kappa, const world_view& w, const transition_system& ts,
                                            const ranking_assignment& assign )
{
    if ( kappa.empty() )
        throw error( "initial belief state is empty" );
    auto condition = detail::intersect_all( detail::observation_preimages( w, ts ), ts.state_count() );
    if ( condition.empty() )
        throw inconsistent_view_error( "world view is inconsistent; use evolve to repair it" );
    belief_trajectory out{ revise( kappa, condition, assign ) };
    for ( auto a : w.actions() )
        out.push_back( update( out.back(), a, ts ) );
    return out;
}

// Lazily materialised set of weakenings: each informative observation is either
// kept or replaced by 2^F. Element k retains exactly the informative positions
// whose bit is set in k.
class weakening_set
{
public:
    explicit weakening_set( observation_trajectory observations )
            : _problem( observations, std::vector<state_set>( observations.size() ),
                        observations.empty() ? 0 : observations.front().universe() )
    {
    }

    [[nodiscard]] std::size_t size() const { return std::size_t{ 1 } << _problem.informative().size(); }
    [[nodiscard]] observation_trajectory operator[]( std::size_t k ) const
    {
        return _problem.view( static_cast<detail::retained_mask>( k ) );
    }

    class iterator
    {
    public:
        using value_type = observation_trajectory;
        using difference_type = std::ptrdiff_t;

        iterator() = default;
        iterator( const weakening_set* owner, std::size_t k ) : _owner{ owner }, _k{ k } {}

        value_type operator*() const { return ( *_owner )[ _k ]; }
        iterator& operator++()
        {
            ++_k;
            return *this;
        }
        iterator operator++( int )
        {
            auto tmp = *this;
            ++_k;
            return tmp;
        }
        friend bool operator==( const iterator& a, const iterator& b ) { return a._k == b._k; }

    private:
        const weakening_set* _owner = nullptr;
        std::size_t _k = 0;
    };

    [[nodiscard]] iterator begin() const { return { this, 0 }; }
    [[nodiscard]] iterator end() const { return { this, size() }; }

private:
    detail::repair_problem _problem;
};

inline weakening_set weakenings( observation_trajectory observations )
{
    return weakening_set( std::move( observations ) );
}

/// Consistent weakenings that would become inconsistent if any discarded
/// observation were re-introduced. Canonically ordered.
inline std::vector<observation_trajectory> minimal_repair_candidates( const world_view& w,
                                                                     const transition_system& ts )
{
    detail::repair_problem p( w.observations(), detail::observation_preimages( w, ts ), ts.state_count() );
    return detail::sorted_views( p, p.maximal_consistent() );
}

/// Candidates not beaten under the reliability ordering. Canonically ordered.
inline std::vector<observation_trajectory> repairs( const world_view& w, const transition_system& ts,
                                                   const reliability& r )
{
    detail::repair_problem p( w.observations(), detail::observation_preimages( w, ts ), ts.state_count() );
    return detail::sorted_views( p, p.repairs( r.values( w.size() ) ) );
}

inline evolution_result evolve( const state_set& kappa, const world_view& w, const transition_system& ts,
                                const ranking_assignment& assign, const reliability& r = reliability::recency() )
{
    if ( kappa.empty() )
        throw error( "initial belief state is empty" );
    evolution_result result;
    if ( consistent( w, ts ) )
    {
        result.was_consistent = true;
        result.trajectories.push_back( evolve_consistent( kappa, w, ts, assign ) );
        result.repaired_views.push_back( w.observations() );
        return result;
    }
    for ( auto& view : repairs( w, ts, r ) )
    {
        result.trajectories.push_back( evolve_consistent( kappa, world_view( w.actions(), view ), ts, assign ) );
        result.repaired_views.push_back( std::move( view ) );
    }
    return result;
}

/// One trajectory covering every repair: the union of their initial states,
/// replayed through the actions.
inline belief_trajectory evolve_skeptical( const state_set& kappa, const world_view& w, const transition_system& ts,
                                           const ranking_assignment& assign,
                                           const reliability& r = reliability::recency() )
{
    auto result = evolve( kappa, w, ts, assign, r );
    belief_trajectory out{ state_set( ts.state_count() ) };
    for ( const auto& t : result.trajectories )
        out.front() |= t.front();
    for ( auto a : w.actions() )
        out.push_back( update( out.back(), a, ts ) );
    return out;
}

/// Final state of evolving a single trailing observation, computed as
/// (kappa <> A) * alpha. Requires alpha to meet kappa <> A.
inline state_set final_state_shortcut( const state_set& kappa, std::span<const action_id> actions,
                                       const state_set& alpha, const transition_system& ts,
                                       const ranking_assignment& assign )
{
    auto progressed = update_seq( kappa, actions, ts );
    if ( !progressed.intersects( alpha ) )
        throw error( "shortcut needs an observation that meets the updated belief state" );
    return revise( progressed, alpha, assign );
}

/// Iterated revision by a sequence of observations under null actions. When
/// the reliability leaves several repairs, their results are united.
inline state_set iterated_revise( const state_set& kappa, const observation_trajectory& observations,
                                  const ranking_assignment& assign, const reliability& r = reliability::recency() )
{
    if ( kappa.empty() )
        throw error( "initial belief state is empty" );
    for ( const auto& o : observations )
        if ( o.universe() != kappa.universe() )
            throw error( "observations and belief state use different signatures" );
    // Under null actions every pre-image is the observation itself.
    detail::repair_problem p( observations, observations, kappa.universe() );
    auto all = p.all_retained();
    if ( p.consistent( all ) )
        return revise( kappa, p.condition( all ), assign );
    state_set out( kappa.universe() );
    for ( auto m : p.repairs( r.values( observations.size() ) ) )
        out |= revise( kappa, p.condition( m ), assign );
    return out;
}

} // namespace bevo
