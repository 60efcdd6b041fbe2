#pragma once

// Small-scope checkers for the postulate families that belief evolution is
// measured against: the action/observation interaction properties P1-P5, the
// I1/I2 characterisation of the combined operator, set-level AGM laws,
// Darwiche-Pearl (plus Recalcitrance) for the induced iterated revision, and
// Lehmann's sequence postulates. Exhaustive where the scope is small, seeded
// sampling otherwise.

#include "dsl.hpp"
#include "evolution.hpp"
#include "kernel.hpp"
#include "revision.hpp"
#include "update.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace bevo
{

struct instance
{
    transition_system ts;
    state_set kappa;
    action_trajectory actions;
    observation_trajectory observations;
};

struct violation
{
    std::string postulate;
    instance inst;
    state_set lhs;
    state_set rhs;
    std::string detail; // names the sets the postulate was instantiated with
};

struct suite_report
{
    std::string suite;
    std::string scope;
    std::size_t instances = 0;
    std::size_t violation_count = 0;
    std::vector<violation> violations; // the first max_recorded of them
    std::vector<std::string> notes;
    std::size_t max_recorded = 100;

    [[nodiscard]] bool passed() const { return violation_count == 0; }

    void record( violation v )
    {
        ++violation_count;
        if ( violations.size() < max_recorded )
            violations.push_back( std::move( v ) );
    }

    [[nodiscard]] std::size_t count( std::string_view postulate ) const
    {
        return static_cast<std::size_t>( std::count_if( violations.begin(), violations.end(),
                                                        [ & ]( const auto& v ) { return v.postulate == postulate; } ) );
    }
};

struct scope
{
    std::size_t fluents = 2;
    bool sampled = false; // sample even where exhaustive enumeration is possible
    std::uint64_t seed = 0;
    std::size_t samples = 1000;
    std::size_t max_length = 2; // action trajectory length; total sequence length for Lehmann
};

// ---------------------------------------------------------------------------
// Instances

/// p, q, r, ... then f11, f12, ...
inline std::vector<std::string> fluent_names( std::size_t n )
{
    static const char* letters[] = { "p", "q", "r", "s", "t", "u", "v", "w", "x", "y", "z" };
    std::vector<std::string> out;
    for ( std::size_t k = 0; k < n; ++k )
        out.push_back( k < std::size( letters ) ? letters[ k ] : "f" + std::to_string( k ) );
    return out;
}

inline signature suite_signature( std::size_t fluents, bool with_action = true )
{
    return signature( fluent_names( fluents ),
                      with_action ? std::vector<std::string>{ "a" } : std::vector<std::string>{} );
}

inline transition_system identity_system( const signature& sig ) { return complete_transitions( sig, {} ); }

/// Deterministic system where action 0 sends state s to targets[s].
inline transition_system single_action_system( const signature& sig, const std::vector<state_index>& targets )
{
    std::vector<transition> rel;
    for ( state_index s = 0; s < targets.size(); ++s )
        rel.push_back( { s, action_id{ 0 }, targets[ s ] } );
    return complete_transitions( sig, rel );
}

inline constexpr std::size_t exhaustive_system_limit = 2;

/// Every deterministic single-action system over |F| fluents (|F| <= 2).
inline std::vector<transition_system> enumerate_systems( std::size_t fluents )
{
    if ( fluents > exhaustive_system_limit )
        throw error( "exhaustive transition-system enumeration is limited to " +
                     std::to_string( exhaustive_system_limit ) + " fluents; sample larger scopes" );
    auto sig = suite_signature( fluents );
    const auto n = sig.state_count();
    std::vector<transition_system> out;
    std::vector<state_index> targets( n, 0 );
    for ( ;; )
    {
        out.push_back( single_action_system( sig, targets ) );
        std::size_t k = 0;
        while ( k < n && ++targets[ k ] == n )
            targets[ k++ ] = 0;
        if ( k == n )
            break;
    }
    return out;
}

/// All subsets of the universe, ascending by bitmask; only for universes of at most 16 states.
inline std::vector<state_set> all_sets( std::size_t universe, bool nonempty )
{
    if ( universe > 16 )
        throw error( "exhaustive set enumeration is limited to 16 states" );
    std::vector<state_set> out;
    for ( std::uint32_t m = nonempty ? 1 : 0; m < ( std::uint32_t{ 1 } << universe ); ++m )
    {
        state_set s( universe );
        for ( state_index i = 0; i < universe; ++i )
            if ( ( m >> i ) & 1u )
                s.insert( i );
        out.push_back( std::move( s ) );
    }
    return out;
}

/// Every action sequence of length 1..max_length over the system's actions.
inline std::vector<action_trajectory> all_trajectories( const signature& sig, std::size_t max_length )
{
    std::vector<action_trajectory> out;
    std::vector<action_trajectory> layer{ {} };
    for ( std::size_t len = 1; len <= max_length; ++len )
    {
        std::vector<action_trajectory> next;
        for ( const auto& t : layer )
            for ( std::uint32_t a = 0; a < sig.actions().size(); ++a )
            {
                auto u = t;
                u.push_back( action_id{ a } );
                next.push_back( std::move( u ) );
            }
        out.insert( out.end(), next.begin(), next.end() );
        layer = std::move( next );
    }
    return out;
}

/// Seeded source of random systems and sets. Draws depend only on the seed.
class sampler
{
public:
    explicit sampler( std::uint64_t seed ) : _rng{ seed } {}

    std::size_t below( std::size_t n ) { return static_cast<std::size_t>( _rng() % n ); }

    state_set any_set( std::size_t universe )
    {
        state_set s( universe );
        for ( state_index i = 0; i < universe; ++i )
            if ( _rng() & 1u )
                s.insert( i );
        return s;
    }

    state_set nonempty_set( std::size_t universe )
    {
        for ( ;; )
            if ( auto s = any_set( universe ); !s.empty() )
                return s;
    }

    transition_system system( const signature& sig )
    {
        std::vector<state_index> targets( sig.state_count() );
        for ( auto& t : targets )
            t = static_cast<state_index>( below( sig.state_count() ) );
        return single_action_system( sig, targets );
    }

    action_trajectory trajectory( const signature& sig, std::size_t max_length )
    {
        action_trajectory out( 1 + below( max_length ) );
        for ( auto& a : out )
            a = action_id{ static_cast<std::uint32_t>( below( sig.actions().size() ) ) };
        return out;
    }

private:
    std::mt19937_64 _rng;
};

/// Observation trajectory of n - 1 vacuous observations followed by alpha.
inline observation_trajectory trailing_observation( const state_set& alpha, std::size_t n )
{
    observation_trajectory out( n, state_set::full( alpha.universe() ) );
    out.back() = alpha;
    return out;
}

inline bool exhaustive_in( const scope& sc, std::size_t limit ) { return !sc.sampled && sc.fluents <= limit; }

inline std::string scope_text( const scope& sc, bool exhaustive, const std::string& extra = {} )
{
    std::string out = "|F|=" + std::to_string( sc.fluents ) + ( exhaustive ? " exhaustive" : " sampled" );
    if ( !exhaustive )
        out += " seed=" + std::to_string( sc.seed ) + " samples=" + std::to_string( sc.samples );
    return out + extra;
}

/// Interaction instances: a system, a non-empty kappa, an action trajectory and
/// one trailing observation. Exhaustive for |F| <= 2 unless sampling is requested.
template <typename Fn>
void for_each_instance( const scope& sc, Fn&& fn )
{
    if ( sc.max_length == 0 )
        throw error( "action trajectories need length at least 1" );
    if ( exhaustive_in( sc, exhaustive_system_limit ) )
    {
        auto systems = enumerate_systems( sc.fluents );
        const auto universe = systems.front().state_count();
        auto kappas = all_sets( universe, true );
        auto alphas = all_sets( universe, false );
        auto trajectories = all_trajectories( systems.front().sig(), sc.max_length );
        for ( const auto& ts : systems )
            for ( const auto& kappa : kappas )
                for ( const auto& alpha : alphas )
                    for ( const auto& acts : trajectories )
                        fn( instance{ ts, kappa, acts, trailing_observation( alpha, acts.size() ) } );
        return;
    }
    if ( sc.fluents > max_fluents )
        throw error( "at most " + std::to_string( max_fluents ) + " fluents are supported" );
    auto sig = suite_signature( sc.fluents );
    sampler rng( sc.seed );
    for ( std::size_t i = 0; i < sc.samples; ++i )
    {
        auto ts = rng.system( sig );
        auto kappa = rng.nonempty_set( sig.state_count() );
        auto acts = rng.trajectory( sig, sc.max_length );
        auto alpha = rng.any_set( sig.state_count() );
        fn( instance{ std::move( ts ), std::move( kappa ), acts, trailing_observation( alpha, acts.size() ) } );
    }
}

// ---------------------------------------------------------------------------
// Rendering of instances and reports

inline std::string describe( const instance& inst )
{
    const auto& sig = inst.ts.sig();
    std::string out = "kappa = " + format_state_set( inst.kappa, sig ) + "; actions = <";
    for ( std::size_t i = 0; i < inst.actions.size(); ++i )
        out += ( i ? ", " : "" ) + sig.action_name( inst.actions[ i ] );
    return out + ">; observations = " + format_observations( inst.observations, sig );
}

/// Domain and scenario documents that replay the instance through the CLI.
inline std::pair<std::string, std::string> replay_documents( const instance& inst )
{
    domain_doc dom{ "instance", inst.ts, false, false };
    scenario_doc scen{ "instance", inst.kappa, world_view( inst.actions, inst.observations ), reliability::recency(),
                       evolution_mode::credulous };
    return { serialize_domain( dom ), serialize_scenario( scen, inst.ts.sig() ) };
}

inline std::string summary_line( const suite_report& rep )
{
    return "suite " + rep.suite + " | scope " + rep.scope + " | instances " + std::to_string( rep.instances ) +
           " | violations " + std::to_string( rep.violation_count );
}

inline nlohmann::json report_to_json( const suite_report& rep )
{
    auto vs = nlohmann::json::array();
    for ( const auto& v : rep.violations )
    {
        const auto& sig = v.inst.ts.sig();
        auto [ dom, scen ] = replay_documents( v.inst );
        vs.push_back( { { "suite", rep.suite },
                        { "postulate", v.postulate },
                        { "instance", { { "description", describe( v.inst ) }, { "domain", dom }, { "scenario", scen } } },
                        { "detail", v.detail },
                        { "lhs", state_set_to_json( v.lhs, sig ) },
                        { "rhs", state_set_to_json( v.rhs, sig ) } } );
    }
    return { { "suite", rep.suite },         { "scope", rep.scope },
             { "instances", rep.instances }, { "violation_count", rep.violation_count },
             { "passed", rep.passed() },     { "violations", std::move( vs ) },
             { "notes", rep.notes } };
}

inline std::string format_report( const suite_report& rep, output_format format )
{
    if ( format == output_format::machine )
        return report_to_json( rep ).dump( 2 ) + "\n";
    std::ostringstream out;
    out << summary_line( rep ) << "\n";
    for ( const auto& note : rep.notes )
        out << "note: " << note << "\n";
    for ( const auto& v : rep.violations )
    {
        const auto& sig = v.inst.ts.sig();
        out << "\nviolation " << v.postulate << "\n";
        out << "  instance: " << describe( v.inst ) << "\n";
        if ( !v.detail.empty() )
            out << "  with: " << v.detail << "\n";
        out << "  lhs = " << format_state_set( v.lhs, sig ) << "\n";
        out << "  rhs = " << format_state_set( v.rhs, sig ) << "\n";
        auto [ dom, scen ] = replay_documents( v.inst );
        out << "  replay domain:\n";
        std::istringstream d( dom ), s( scen );
        for ( std::string line; std::getline( d, line ); )
            out << "    " << line << "\n";
        out << "  replay scenario:\n";
        for ( std::string line; std::getline( s, line ); )
            out << "    " << line << "\n";
    }
    if ( rep.violations.size() < rep.violation_count )
        out << "\n(" << rep.violation_count - rep.violations.size() << " further violations not shown)\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// P1-P5

/// kappa <> A * alpha, as some operator defines it.
using change_operator = std::function<state_set( const state_set& kappa, std::span<const action_id> actions,
                                                 const state_set& alpha, const transition_system& ts )>;

/// Final state of evolving <A, <2^F, ..., alpha>>.
inline change_operator evolution_change( ranking_assignment assign )
{
    return [ assign = std::move( assign ) ]( const state_set& kappa, std::span<const action_id> actions,
                                             const state_set& alpha, const transition_system& ts ) {
        world_view w( action_trajectory( actions.begin(), actions.end() ), trailing_observation( alpha, actions.size() ) );
        return evolve( kappa, w, ts, assign ).trajectories.front().back();
    };
}

/// Update through the actions, then revise the result.
inline change_operator naive_change( ranking_assignment assign )
{
    return [ assign = std::move( assign ) ]( const state_set& kappa, std::span<const action_id> actions,
                                             const state_set& alpha, const transition_system& ts ) {
        return revise( update_seq( kappa, actions, ts ), alpha, assign );
    };
}

/// Evaluates P1-P5 on one instance; the observation is its last component.
/// Failures on instances whose world view is inconsistent are counted in
/// `repair_case_failures` instead of being reported.
inline void check_interaction( const instance& inst, const change_operator& op, suite_report& rep,
                               std::size_t* repair_case_failures = nullptr )
{
    const auto& ts = inst.ts;
    const auto& alpha = inst.observations.back();
    const auto reachable = update_seq( ts.sig().all_states(), inst.actions, ts );
    const auto progressed = update_seq( inst.kappa, inst.actions, ts );
    const auto changed = op( inst.kappa, inst.actions, alpha, ts );
    const auto meet = progressed & alpha;
    const bool consistent_view = reachable.intersects( alpha );

    auto fail = [ & ]( const char* id, const state_set& lhs, const state_set& rhs ) {
        if ( consistent_view )
            rep.record( { id, inst, lhs, rhs, {} } );
        else if ( repair_case_failures )
            ++*repair_case_failures;
    };

    if ( consistent_view && !changed.subset_of( alpha ) )
        fail( "P1", changed, alpha );
    if ( !consistent_view && changed != progressed )
        fail( "P2", changed, progressed );
    if ( !meet.subset_of( changed ) )
        fail( "P3", meet, changed );
    if ( !meet.empty() && !changed.subset_of( meet ) )
        fail( "P4", changed, meet );
    if ( !changed.subset_of( reachable ) )
        fail( "P5", changed, reachable );
}

inline suite_report check_interaction_suite( const change_operator& op, const scope& sc )
{
    suite_report rep;
    rep.suite = "interaction";
    rep.scope = scope_text( sc, exhaustive_in( sc, exhaustive_system_limit ),
                            " trajectories<=" + std::to_string( sc.max_length ) );
    std::size_t repair_case = 0;
    for_each_instance( sc, [ & ]( const instance& inst ) {
        ++rep.instances;
        check_interaction( inst, op, rep, &repair_case );
    } );
    rep.notes.push_back( "inconsistent (repaired) instances failing some property: " + std::to_string( repair_case ) );
    return rep;
}

// ---------------------------------------------------------------------------
// I1 / I2

/// kappa o <<A>, <alpha>>, final state only.
using step_operator =
        std::function<state_set( const state_set& kappa, action_id a, const state_set& alpha, const transition_system& ts )>;

inline step_operator combined_operator( ranking_assignment assign )
{
    return [ assign = std::move( assign ) ]( const state_set& kappa, action_id a, const state_set& alpha,
                                             const transition_system& ts ) {
        return combined_change( kappa, a, alpha, assign, ts );
    };
}

inline step_operator evolution_operator( ranking_assignment assign )
{
    return [ assign = std::move( assign ) ]( const state_set& kappa, action_id a, const state_set& alpha,
                                             const transition_system& ts ) {
        return evolve( kappa, world_view( { a }, { alpha } ), ts, assign ).trajectories.front().back();
    };
}

/// Checks I1 and I2 for op on every non-empty kappa, every action and every alpha of ts.
inline void check_I1_I2( const step_operator& op, const ranking_assignment& assign, const transition_system& ts,
                         suite_report& rep )
{
    if ( ts.state_count() > 16 )
        throw error( "exhaustive I1/I2 check is limited to 16 states" );
    const auto kappas = all_sets( ts.state_count(), true );
    const auto alphas = all_sets( ts.state_count(), false );
    for ( std::uint32_t ai = 0; ai < ts.sig().actions().size(); ++ai )
    {
        action_id a{ ai };
        const auto reachable = update( ts.sig().all_states(), a, ts );
        for ( const auto& alpha : alphas )
        {
            const auto pre = preimage( alpha, std::span<const action_id>( &a, 1 ), ts );
            for ( const auto& kappa : kappas )
            {
                ++rep.instances;
                auto got = op( kappa, a, alpha, ts );
                bool i1 = reachable.intersects( alpha );
                auto want = i1 ? update( revise( kappa, pre, assign ), a, ts ) : update( kappa, a, ts );
                if ( got != want )
                    rep.record( { i1 ? "I1" : "I2", instance{ ts, kappa, { a }, { alpha } }, got, want, {} } );
            }
        }
    }
}

inline suite_report check_I1_I2_suite( const step_operator& op, const ranking_assignment& assign, const scope& sc )
{
    suite_report rep;
    rep.suite = "i1i2";
    const bool exhaustive = exhaustive_in( sc, exhaustive_system_limit );
    rep.scope = scope_text( sc, exhaustive );
    if ( exhaustive )
    {
        for ( const auto& ts : enumerate_systems( sc.fluents ) )
            check_I1_I2( op, assign, ts, rep );
        return rep;
    }
    if ( sc.fluents > max_fluents )
        throw error( "at most " + std::to_string( max_fluents ) + " fluents are supported" );
    auto sig = suite_signature( sc.fluents );
    sampler rng( sc.seed );
    for ( std::size_t i = 0; i < sc.samples; ++i )
    {
        auto ts = rng.system( sig );
        auto kappa = rng.nonempty_set( sig.state_count() );
        auto alpha = rng.any_set( sig.state_count() );
        action_id a{ static_cast<std::uint32_t>( rng.below( sig.actions().size() ) ) };
        ++rep.instances;
        const auto reachable = update( sig.all_states(), a, ts );
        bool i1 = reachable.intersects( alpha );
        auto want = i1 ? update( revise( kappa, preimage( alpha, std::span<const action_id>( &a, 1 ), ts ), assign ), a, ts )
                       : update( kappa, a, ts );
        auto got = op( kappa, a, alpha, ts );
        if ( got != want )
            rep.record( { i1 ? "I1" : "I2", instance{ std::move( ts ), kappa, { a }, { alpha } }, got, want, {} } );
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Set-level AGM laws

namespace detail
{

// Checks the five laws for one (kappa, alpha, beta). rev(x) revises kappa by x.
template <typename Rev>
void agm_laws( const state_set& kappa, const state_set& alpha, const state_set& beta, Rev&& rev,
               const state_set& k_alpha, suite_report& rep, const transition_system& ts, bool first_beta )
{
    auto record = [ & ]( const char* id, const state_set& lhs, const state_set& rhs, std::string detail ) {
        rep.record( { id, instance{ ts, kappa, action_trajectory( 2, ts.sig().null_action() ), { alpha, beta } }, lhs,
                      rhs, std::move( detail ) } );
    };
    if ( first_beta )
    {
        if ( !k_alpha.subset_of( alpha ) )
            record( "AGM-success", k_alpha, alpha, "kappa * alpha vs alpha" );
        auto meet = kappa & alpha;
        if ( !meet.empty() && k_alpha != meet )
            record( "AGM-vacuity", k_alpha, meet, "kappa * alpha vs kappa & alpha" );
        if ( k_alpha.empty() != alpha.empty() )
            record( "AGM-consistency", k_alpha, alpha, "kappa * alpha empty iff alpha empty" );
    }
    auto lhs = k_alpha & beta;
    auto k_ab = rev( alpha & beta );
    if ( !lhs.subset_of( k_ab ) )
        record( "AGM-superexpansion", lhs, k_ab, "(kappa * alpha) & beta vs kappa * (alpha & beta)" );
    if ( !lhs.empty() && !k_ab.subset_of( lhs ) )
        record( "AGM-subexpansion", k_ab, lhs, "kappa * (alpha & beta) vs (kappa * alpha) & beta" );
}

} // namespace detail

inline constexpr std::size_t agm_exhaustive_limit = 3;

/// (i) kappa * alpha within alpha; (ii) equals kappa & alpha when that is
/// non-empty; (iii) empty iff alpha is; (iv) (kappa * alpha) & beta within
/// kappa * (alpha & beta); (v) the converse when the left side is non-empty.
inline suite_report check_agm( const ranking_assignment& assign, const scope& sc )
{
    suite_report rep;
    rep.suite = "agm";
    const bool exhaustive = exhaustive_in( sc, agm_exhaustive_limit );
    rep.scope = scope_text( sc, exhaustive );
    if ( sc.fluents > max_fluents )
        throw error( "at most " + std::to_string( max_fluents ) + " fluents are supported" );
    auto sig = suite_signature( sc.fluents, false );
    auto ts = identity_system( sig );
    const auto universe = sig.state_count();

    if ( exhaustive )
    {
        const auto sets = all_sets( universe, false );
        for ( std::size_t ki = 1; ki < sets.size(); ++ki )
        {
            const auto& kappa = sets[ ki ];
            auto ranking = assign( kappa );
            std::vector<state_set> table;
            table.reserve( sets.size() );
            for ( const auto& x : sets )
                table.push_back( min_states( x, ranking ) );
            auto rev = [ & ]( const state_set& x ) { return table[ x.words()[ 0 ] ]; };
            for ( std::size_t ai = 0; ai < sets.size(); ++ai )
            {
                ++rep.instances;
                for ( std::size_t bi = 0; bi < sets.size(); ++bi )
                    detail::agm_laws( kappa, sets[ ai ], sets[ bi ], rev, table[ ai ], rep, ts, bi == 0 );
            }
        }
        return rep;
    }
    sampler rng( sc.seed );
    for ( std::size_t i = 0; i < sc.samples; ++i )
    {
        auto kappa = rng.nonempty_set( universe );
        auto alpha = rng.any_set( universe );
        auto beta = rng.any_set( universe );
        auto ranking = assign( kappa );
        auto rev = [ & ]( const state_set& x ) { return min_states( x, ranking ); };
        ++rep.instances;
        detail::agm_laws( kappa, alpha, beta, rev, rev( alpha ), rep, ts, true );
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Darwiche-Pearl and Recalcitrance

/// kappa * beta * alpha for some notion of iterated revision.
using iterated_operator =
        std::function<state_set( const state_set& kappa, const state_set& beta, const state_set& alpha )>;

/// kappa o <<lambda, lambda>, <beta, alpha>>, final state.
inline iterated_operator evolution_iterated( ranking_assignment assign, reliability r = reliability::recency() )
{
    return [ assign = std::move( assign ), r = std::move( r ) ]( const state_set& kappa, const state_set& beta,
                                                                 const state_set& alpha ) {
        return iterated_revise( kappa, { beta, alpha }, assign, r );
    };
}

/// Two successive single-shot revisions.
inline iterated_operator naive_iterated( ranking_assignment assign )
{
    return [ assign = std::move( assign ) ]( const state_set& kappa, const state_set& beta, const state_set& alpha ) {
        return revise( revise( kappa, beta, assign ), alpha, assign );
    };
}

inline void check_dp( const iterated_operator& op, const ranking_assignment& assign, const state_set& kappa,
                      const state_set& beta, const state_set& alpha, const transition_system& ts, suite_report& rep )
{
    ++rep.instances;
    const auto k_alpha = revise( kappa, alpha, assign );
    const auto k_beta_alpha = op( kappa, beta, alpha );
    auto record = [ & ]( const char* id, const state_set& lhs, const state_set& rhs ) {
        rep.record( { id, instance{ ts, kappa, action_trajectory( 2, ts.sig().null_action() ), { beta, alpha } }, lhs,
                      rhs, "observations are <beta, alpha>" } );
    };
    if ( alpha.subset_of( beta ) && k_beta_alpha != k_alpha )
        record( "DP1", k_beta_alpha, k_alpha );
    if ( !alpha.intersects( beta ) && k_beta_alpha != k_alpha )
        record( "DP2", k_beta_alpha, k_alpha );
    if ( k_alpha.subset_of( beta ) && !k_beta_alpha.subset_of( beta ) )
        record( "DP3", k_beta_alpha, beta );
    if ( k_alpha.intersects( beta ) && !k_beta_alpha.intersects( beta ) )
        record( "DP4", k_beta_alpha, beta );
    if ( beta.intersects( alpha ) && !k_beta_alpha.subset_of( beta ) )
        record( "Recalcitrance", k_beta_alpha, beta );
}

inline constexpr std::size_t dp_exhaustive_limit = 2;

/// DP1-DP4 and Recalcitrance for every non-empty kappa, beta, alpha.
inline suite_report check_dp_suite( const iterated_operator& op, const ranking_assignment& assign, const scope& sc )
{
    suite_report rep;
    rep.suite = "dp";
    const bool exhaustive = exhaustive_in( sc, dp_exhaustive_limit );
    rep.scope = scope_text( sc, exhaustive );
    if ( sc.fluents > max_fluents )
        throw error( "at most " + std::to_string( max_fluents ) + " fluents are supported" );
    auto sig = suite_signature( sc.fluents, false );
    auto ts = identity_system( sig );
    if ( exhaustive )
    {
        const auto sets = all_sets( sig.state_count(), true );
        for ( const auto& kappa : sets )
            for ( const auto& beta : sets )
                for ( const auto& alpha : sets )
                    check_dp( op, assign, kappa, beta, alpha, ts, rep );
        return rep;
    }
    sampler rng( sc.seed );
    for ( std::size_t i = 0; i < sc.samples; ++i )
    {
        auto kappa = rng.nonempty_set( sig.state_count() );
        auto beta = rng.nonempty_set( sig.state_count() );
        auto alpha = rng.nonempty_set( sig.state_count() );
        check_dp( op, assign, kappa, beta, alpha, ts, rep );
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Lehmann

/// kappa o O: final state of evolution under null actions; kappa itself for the empty sequence.
inline state_set evolve_null( const state_set& kappa, const observation_trajectory& obs, const ranking_assignment& assign,
                              const reliability& r = reliability::recency() )
{
    if ( obs.empty() )
        return kappa;
    return iterated_revise( kappa, obs, assign, r );
}

namespace detail
{

inline observation_trajectory concat( observation_trajectory o, std::initializer_list<state_set> tail )
{
    o.insert( o.end(), tail.begin(), tail.end() );
    return o;
}

inline std::string sequence_text( const observation_trajectory& o, const signature& sig )
{
    std::string out = "<";
    for ( std::size_t i = 0; i < o.size(); ++i )
        out += ( i ? ", " : "" ) + format_state_set( o[ i ], sig );
    return out + ">";
}

// L2, L3, L4*, L5*, L6*, L7 for one (kappa, O, alpha, beta). `room` is how many
// observations may still follow O within the length bound.
inline void lehmann_laws( const state_set& kappa, const observation_trajectory& O, const state_set& alpha,
                          const state_set& beta, std::size_t room, const ranking_assignment& assign,
                          const transition_system& ts, bool first_beta, suite_report& rep )
{
    const auto& sig = ts.sig();
    auto ev = [ & ]( const observation_trajectory& seq ) { return evolve_null( kappa, seq, assign ); };
    auto with = [ & ]( bool b ) {
        return "O = " + sequence_text( O, sig ) + ", alpha = " + format_state_set( alpha, sig ) +
               ( b ? ", beta = " + format_state_set( beta, sig ) : std::string{} );
    };
    auto record = [ & ]( const char* id, const observation_trajectory& seq, const state_set& lhs, const state_set& rhs,
                         bool b ) {
        rep.record( { id, instance{ ts, kappa, action_trajectory( seq.size(), sig.null_action() ), seq }, lhs, rhs,
                      with( b ) } );
    };

    const auto k_O = ev( O );
    const auto O_a = concat( O, { alpha } );
    const auto k_Oa = ev( O_a );

    if ( first_beta )
    {
        if ( !k_Oa.subset_of( alpha ) )
            record( "L2", O_a, k_Oa, alpha, false );
        if ( !O.empty() && k_O.subset_of( alpha ) && k_O != k_Oa )
            record( "L4*", O_a, k_Oa, k_O, false );
        auto not_alpha = alpha.complement();
        if ( room >= 2 && !not_alpha.empty() )
        {
            auto seq = concat( O, { not_alpha, alpha } );
            auto rhs = ev( seq );
            if ( !k_Oa.subset_of( rhs ) )
                record( "L7", seq, k_Oa, rhs, false );
        }
    }
    if ( k_Oa.subset_of( beta ) && k_O.subset_of( alpha ) && !k_O.subset_of( beta ) )
        record( "L3", O_a, k_O, beta, true );
    if ( room >= 2 )
    {
        const auto O_ab = concat( O, { alpha, beta } );
        if ( beta.subset_of( alpha ) )
        {
            auto lhs = ev( O_ab );
            auto rhs = ev( concat( O, { beta } ) );
            if ( lhs != rhs )
                record( "L5*", O_ab, lhs, rhs, true );
        }
        if ( k_Oa.intersects( beta ) )
        {
            auto lhs = ev( O_ab );
            auto rhs = ev( concat( O, { alpha, alpha & beta } ) );
            if ( lhs != rhs )
                record( "L6*", O_ab, lhs, rhs, true );
        }
    }
}

} // namespace detail

inline constexpr std::size_t lehmann_exhaustive_limit = 2;

/// L2, L3, L4*, L5*, L6*, L7 with every evaluated sequence at most max_length
/// long and every component non-empty.
inline suite_report check_lehmann( const ranking_assignment& assign, const scope& sc )
{
    suite_report rep;
    rep.suite = "lehmann";
    const auto max_len = sc.max_length;
    if ( max_len < 1 )
        throw error( "Lehmann sequences need length at least 1" );
    const bool exhaustive = exhaustive_in( sc, lehmann_exhaustive_limit );
    if ( exhaustive && max_len > 3 )
        throw error( "exhaustive Lehmann check is limited to sequences of length 3" );
    rep.scope = scope_text( sc, exhaustive, " length<=" + std::to_string( max_len ) );
    if ( sc.fluents > max_fluents )
        throw error( "at most " + std::to_string( max_fluents ) + " fluents are supported" );
    auto sig = suite_signature( sc.fluents, false );
    auto ts = identity_system( sig );
    const auto universe = sig.state_count();

    if ( exhaustive )
    {
        const auto sets = all_sets( universe, true );
        std::vector<observation_trajectory> prefixes{ {} };
        for ( std::size_t len = 1; len < max_len; ++len )
        {
            std::vector<observation_trajectory> grown;
            for ( const auto& p : prefixes )
                if ( p.size() == len - 1 )
                    for ( const auto& s : sets )
                        grown.push_back( detail::concat( p, { s } ) );
            prefixes.insert( prefixes.end(), grown.begin(), grown.end() );
        }
        for ( const auto& kappa : sets )
            for ( const auto& O : prefixes )
                for ( const auto& alpha : sets )
                {
                    ++rep.instances;
                    for ( std::size_t bi = 0; bi < sets.size(); ++bi )
                        detail::lehmann_laws( kappa, O, alpha, sets[ bi ], max_len - O.size(), assign, ts, bi == 0, rep );
                }
        return rep;
    }
    sampler rng( sc.seed );
    for ( std::size_t i = 0; i < sc.samples; ++i )
    {
        auto kappa = rng.nonempty_set( universe );
        observation_trajectory O( rng.below( max_len ) );
        for ( auto& o : O )
            o = rng.nonempty_set( universe );
        auto alpha = rng.nonempty_set( universe );
        auto beta = rng.nonempty_set( universe );
        ++rep.instances;
        detail::lehmann_laws( kappa, O, alpha, beta, max_len - O.size(), assign, ts, true, rep );
    }
    return rep;
}

// Lehmann counterexample. The three abstract states are pinned to the fluent
// states s1 = {}, s2 = {p}, s3 = {q} over F = {p, q}; the fourth state {p, q}
// is Hamming distance 2 from s1, so Dalal revision of {s1} ranks it strictly
// worse than s2 and s3.
struct lehmann_value
{
    std::string label;
    state_set expected;
    state_set actual;

    [[nodiscard]] bool matches() const { return expected == actual; }
};

struct lehmann_verdict
{
    std::string postulate;
    bool holds;
    std::string reason;
};

struct lehmann_report
{
    signature sig;
    std::vector<lehmann_value> revisions; // single-shot revisions the instance relies on
    std::vector<lehmann_value> values;    // the displayed evolution values
    std::vector<lehmann_verdict> verdicts;

    [[nodiscard]] bool reproduced() const
    {
        auto ok = []( const auto& vs ) { return std::all_of( vs.begin(), vs.end(), []( const auto& v ) { return v.matches(); } ); };
        if ( !ok( revisions ) || !ok( values ) )
            return false;
        for ( const auto& v : verdicts )
        {
            bool should_fail = v.postulate == "L4" || v.postulate == "L5" || v.postulate == "L6";
            if ( v.holds == should_fail )
                return false;
        }
        return true;
    }
};

inline lehmann_report lehmann_counterexample( const ranking_assignment& assign = dalal_assignment() )
{
    lehmann_report rep{ signature( { "p", "q" }, {} ), {}, {}, {} };
    const auto& sig = rep.sig;
    const state_index s1 = 0, s2 = 1, s3 = 2, s4 = 3;
    auto set = [ & ]( std::initializer_list<state_index> m ) { return state_set( sig.state_count(), m ); };
    auto ev = [ & ]( const state_set& k, const observation_trajectory& o ) { return evolve_null( k, o, assign ); };

    const auto kappa = set( { s1 } );
    const auto alpha = set( { s2, s3 } );
    const auto beta = set( { s3 } );
    const auto gamma = set( { s1, s3 } );
    const observation_trajectory O{ set( { s3 } ) };
    const auto Op = set( { s1, s2 } );
    using detail::concat;

    rep.revisions = {
            { "{s1} * {s3}", set( { s3 } ), revise( kappa, set( { s3 } ), assign ) },
            { "{s1} * {s1, s2}", set( { s1 } ), revise( kappa, set( { s1, s2 } ), assign ) },
            { "{s1} * {s2}", set( { s2 } ), revise( kappa, set( { s2 } ), assign ) },
    };

    const auto k_O = ev( kappa, O );
    const auto k_OOp = ev( kappa, concat( O, { Op } ) );
    const auto k_OaOp = ev( kappa, concat( O, { alpha, Op } ) );
    const auto k_Oa = ev( kappa, concat( O, { alpha } ) );
    const auto k_OagOp = ev( kappa, concat( O, { alpha, gamma, Op } ) );
    const auto k_OaagOp = ev( kappa, concat( O, { alpha, alpha & gamma, Op } ) );
    rep.values = {
            { "k o O", set( { s3 } ), k_O },
            { "k o (O . O')", set( { s1 } ), k_OOp },
            { "k o (O . a . O')", set( { s2 } ), k_OaOp },
            { "k o (O . a)", set( { s3 } ), k_Oa },
            { "k o (O . a . g . O')", set( { s1 } ), k_OagOp },
            { "k o (O . a . (a & g) . O')", set( { s2 } ), k_OaagOp },
    };

    auto implies = []( bool a, bool b ) { return !a || b; };
    const auto k_ObOp = ev( kappa, concat( O, { beta, Op } ) );
    const auto k_OabOp = ev( kappa, concat( O, { alpha, beta, Op } ) );
    const auto k_Oab = ev( kappa, concat( O, { alpha, beta } ) );
    const auto k_Ob = ev( kappa, concat( O, { beta } ) );
    const auto k_Oag = ev( kappa, concat( O, { alpha, gamma } ) );
    const auto k_Oaag = ev( kappa, concat( O, { alpha, alpha & gamma } ) );
    const auto not_alpha = alpha.complement();
    const auto k_Ona = ev( kappa, concat( O, { not_alpha, alpha } ) );
    (void)s4;

    rep.verdicts = {
            { "L2", k_Oa.subset_of( alpha ), "k o (O . a) within a" },
            { "L3", implies( k_Oa.subset_of( beta ) && k_O.subset_of( alpha ), k_O.subset_of( beta ) ),
              "k o (O . a) within b and k o O within a => k o O within b" },
            { "L4", implies( k_O.subset_of( alpha ), k_OOp == k_OaOp ), "k o O within a => k o (O . O') = k o (O . a . O')" },
            { "L5", implies( beta.subset_of( alpha ), k_OabOp == k_ObOp ), "b within a => k o (O . a . b . O') = k o (O . b . O')" },
            { "L6", implies( k_Oa.intersects( gamma ), k_OagOp == k_OaagOp ),
              "k o (O . a) meets g => k o (O . a . g . O') = k o (O . a . (a & g) . O')" },
            { "L4*", implies( k_O.subset_of( alpha ), k_O == k_Oa ), "k o O within a => k o O = k o (O . a)" },
            { "L5*", implies( beta.subset_of( alpha ), k_Oab == k_Ob ), "b within a => k o (O . a . b) = k o (O . b)" },
            { "L6*", implies( k_Oa.intersects( gamma ), k_Oag == k_Oaag ), "k o (O . a) meets g => k o (O . a . g) = k o (O . a . (a & g))" },
            { "L7", k_Oa.subset_of( k_Ona ), "k o (O . a) within k o (O . -a . a)" },
    };
    return rep;
}

inline std::string format_lehmann( const lehmann_report& rep, output_format format )
{
    const auto& sig = rep.sig;
    auto abstract = [ & ]( const state_set& s ) {
        std::string out = "{";
        bool first = true;
        s.for_each( [ & ]( state_index i ) {
            out += ( first ? "s" : ", s" ) + std::to_string( i + 1 );
            first = false;
        } );
        return out + "}";
    };
    if ( format == output_format::machine )
    {
        auto values = [ & ]( const std::vector<lehmann_value>& vs ) {
            auto out = nlohmann::json::array();
            for ( const auto& v : vs )
                out.push_back( { { "label", v.label },
                                 { "expected", state_set_to_json( v.expected, sig ) },
                                 { "actual", state_set_to_json( v.actual, sig ) },
                                 { "matches", v.matches() } } );
            return out;
        };
        auto verdicts = nlohmann::json::array();
        std::vector<std::string> failed;
        for ( const auto& v : rep.verdicts )
        {
            verdicts.push_back( { { "postulate", v.postulate }, { "holds", v.holds } } );
            if ( !v.holds )
                failed.push_back( v.postulate );
        }
        return nlohmann::json{ { "signature", signature_to_json( sig ) },
                               { "states", { { "s1", "{}" }, { "s2", "{p}" }, { "s3", "{q}" }, { "s4", "{p, q}" } } },
                               { "revisions", values( rep.revisions ) },
                               { "values", values( rep.values ) },
                               { "verdicts", std::move( verdicts ) },
                               { "failed", failed },
                               { "reproduced", rep.reproduced() } }
                       .dump( 2 ) +
               "\n";
    }
    std::ostringstream out;
    std::vector<std::string> failed, held;
    for ( const auto& v : rep.verdicts )
        ( v.holds ? held : failed ).push_back( v.postulate );
    auto join = []( const std::vector<std::string>& xs ) {
        std::string s;
        for ( std::size_t i = 0; i < xs.size(); ++i )
            s += ( i ? ", " : "" ) + xs[ i ];
        return s;
    };
    out << "lehmann counterexample | " << ( rep.reproduced() ? "reproduced" : "NOT reproduced" ) << " | failed "
        << join( failed ) << "\n";
    out << "states: s1 = {}, s2 = {p}, s3 = {q}, s4 = {p, q}\n";
    out << "k = {s1}, a = {s2, s3}, b = {s3}, g = {s1, s3}, O = <{s3}>, O' = <{s1, s2}>\n";
    out << "revisions:\n";
    for ( const auto& v : rep.revisions )
        out << "  " << v.label << " = " << abstract( v.actual ) << ( v.matches() ? "" : "  (expected " + abstract( v.expected ) + ")" )
            << "\n";
    out << "values:\n";
    for ( const auto& v : rep.values )
        out << "  " << v.label << " = " << abstract( v.actual ) << ( v.matches() ? "" : "  (expected " + abstract( v.expected ) + ")" )
            << "\n";
    out << "postulates:\n";
    for ( const auto& v : rep.verdicts )
        out << "  " << v.postulate << ( v.holds ? " holds" : " fails" ) << " (" << v.reason << ")\n";
    out << "failed: " << join( failed ) << "\n";
    out << "held: " << join( held ) << "\n";
    return out.str();
}

} // namespace bevo
