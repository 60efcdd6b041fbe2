#pragma once

// The `bevo` command line. run() never writes to `out` unless it succeeds (or
// finishes a suite run); diagnostics go to `err`.
//
// Exit codes: 0 success, 1 bad input (files, flags, documents), 2 a suite or
// golden reproduction found violations.

#include "dsl.hpp"
#include "evolution.hpp"
#include "postulates.hpp"
#include "revision.hpp"
#include "update.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace bevo::cli
{

inline constexpr int exit_ok = 0;
inline constexpr int exit_input = 1;
inline constexpr int exit_violations = 2;

namespace detail
{

inline std::string read_file( const std::string& path )
{
    std::ifstream in( path, std::ios::binary );
    if ( !in )
        throw error( "cannot read '" + path + "'" );
    return { std::istreambuf_iterator<char>( in ), std::istreambuf_iterator<char>() };
}

// Runs a parser over a file, prefixing diagnostics with the path.
template <typename Parse>
auto parse_file( const std::string& path, Parse&& parse )
{
    auto text = read_file( path );
    try
    {
        return parse( text );
    }
    catch ( const parse_error& e )
    {
        throw error( path + ":" + e.what() );
    }
}

inline domain_doc load_domain( const std::string& path )
{
    return parse_file( path, []( const std::string& t ) { return parse_domain( t ); } );
}

inline scenario_doc load_scenario( const std::string& path, const domain_doc& dom )
{
    return parse_file( path, [ & ]( const std::string& t ) { return parse_scenario( t, dom ); } );
}

inline ranking_assignment load_assignment( const std::string& source, const signature& sig )
{
    if ( source.empty() || source == "dalal" )
        return dalal_assignment();
    auto doc = parse_file( source, [ & ]( const std::string& t ) { return parse_ranking( t, sig ); } );
    return table_assignment( doc.tables );
}

// Command-line set argument: a literal when it starts with '{', else a formula.
inline state_set parse_set_arg( const std::string& what, const std::string& text, const signature& sig )
{
    try
    {
        return parse_state_set( text, sig );
    }
    catch ( const parse_error& e )
    {
        throw error( what + ": column " + std::to_string( e.column() ) + ": " + e.message() );
    }
}

inline action_trajectory parse_actions( const std::vector<std::string>& names, const signature& sig )
{
    action_trajectory out;
    for ( const auto& n : names )
    {
        auto a = sig.find_action( n );
        if ( !a )
            throw error( "unknown action '" + n + "'" );
        out.push_back( *a );
    }
    return out;
}

inline output_format parse_format( const std::string& f )
{
    if ( f == "text" )
        return output_format::text;
    if ( f == "machine" || f == "json" )
        return output_format::machine;
    throw error( "unknown format '" + f + "' (expected text or machine)" );
}

inline std::uint64_t parse_seed( const std::string& text, const char* source )
{
    std::uint64_t v = 0;
    auto [ ptr, ec ] = std::from_chars( text.data(), text.data() + text.size(), v );
    if ( ec != std::errc{} || ptr != text.data() + text.size() || text.empty() )
        throw error( std::string( "invalid seed '" ) + text + "' in " + source );
    return v;
}

inline std::string action_names( const action_trajectory& acts, const signature& sig )
{
    std::string out;
    for ( std::size_t i = 0; i < acts.size(); ++i )
        out += ( i ? " " : "" ) + sig.action_name( acts[ i ] );
    return out;
}

inline nlohmann::json names_json( const action_trajectory& acts, const signature& sig )
{
    auto out = nlohmann::json::array();
    for ( auto a : acts )
        out.push_back( sig.action_name( a ) );
    return out;
}

inline nlohmann::json observations_json( const observation_trajectory& obs, const signature& sig )
{
    auto out = nlohmann::json::array();
    for ( const auto& o : obs )
        out.push_back( o.is_full() ? nlohmann::json( nullptr ) : state_set_to_json( o, sig ) );
    return out;
}

inline const char* reliability_name( const reliability& r )
{
    switch ( r.type() )
    {
    case reliability::kind::recency: return "recency";
    case reliability::kind::constant: return "constant";
    case reliability::kind::weights: return "weights";
    }
    return "recency";
}

inline nlohmann::json scenario_json( const scenario_doc& s )
{
    nlohmann::json rel = { { "kind", reliability_name( s.reliability ) } };
    if ( s.reliability.type() == reliability::kind::weights )
        rel[ "weights" ] = s.reliability.explicit_weights();
    return { { "name", s.name },
             { "mode", s.mode == evolution_mode::skeptical ? "skeptical" : "credulous" },
             { "reliability", std::move( rel ) } };
}

inline std::string dump( const nlohmann::json& j ) { return j.dump( 2 ) + "\n"; }

} // namespace detail

struct options
{
    std::string domain, scenario, ranking = "dalal", format = "text";
    std::string belief, obs, reliability, mode;
    std::vector<std::string> actions, fluent_names;
    std::string suite, which;
    std::size_t fluents = 2, samples = 0, max_length = 0;
    std::optional<std::uint64_t> seed;
};

inline std::string cmd_evolve( const options& o )
{
    auto dom = detail::load_domain( o.domain );
    auto scen = detail::load_scenario( o.scenario, dom );
    const auto& sig = dom.sig();
    if ( o.reliability == "recency" )
        scen.reliability = reliability::recency();
    else if ( o.reliability == "constant" )
        scen.reliability = reliability::constant();
    else if ( !o.reliability.empty() )
        throw error( "unknown reliability '" + o.reliability + "' (expected recency or constant)" );
    if ( o.mode == "credulous" )
        scen.mode = evolution_mode::credulous;
    else if ( o.mode == "skeptical" )
        scen.mode = evolution_mode::skeptical;
    else if ( !o.mode.empty() )
        throw error( "unknown mode '" + o.mode + "' (expected credulous or skeptical)" );

    auto assign = detail::load_assignment( o.ranking, sig );
    auto format = detail::parse_format( o.format );
    auto res = evolve( scen.initial, scen.view, dom.ts, assign, scen.reliability );

    if ( scen.mode == evolution_mode::credulous )
    {
        if ( format == output_format::text )
            return serialize_result( res, sig, format );
        auto doc = result_to_json( res, sig );
        doc[ "signature" ] = signature_to_json( sig );
        doc[ "scenario" ] = detail::scenario_json( scen );
        return detail::dump( doc );
    }

    auto skeptical = evolve_skeptical( scen.initial, scen.view, dom.ts, assign, scen.reliability );
    if ( format == output_format::text )
    {
        std::string out;
        if ( !res.was_consistent )
            out += "skeptical over " + std::to_string( res.repaired_views.size() ) + " repairs\n";
        return out + format_trajectory_text( skeptical, sig );
    }
    evolution_result shown{ { skeptical }, res.repaired_views, res.was_consistent };
    auto doc = result_to_json( shown, sig );
    doc[ "signature" ] = signature_to_json( sig );
    doc[ "scenario" ] = detail::scenario_json( scen );
    return detail::dump( doc );
}

inline std::string cmd_update( const options& o )
{
    auto dom = detail::load_domain( o.domain );
    const auto& sig = dom.sig();
    auto kappa = detail::parse_set_arg( "--belief", o.belief, sig );
    auto acts = detail::parse_actions( o.actions, sig );
    auto result = update_seq( kappa, acts, dom.ts );
    if ( detail::parse_format( o.format ) == output_format::text )
        return "result = " + format_state_set( result, sig ) + "\n";
    return detail::dump( { { "signature", signature_to_json( sig ) },
                           { "belief", state_set_to_json( kappa, sig ) },
                           { "actions", detail::names_json( acts, sig ) },
                           { "result", state_set_to_json( result, sig ) } } );
}

inline std::string cmd_revise( const options& o )
{
    std::optional<signature> sig;
    if ( !o.domain.empty() )
        sig = detail::load_domain( o.domain ).sig();
    else if ( !o.fluent_names.empty() )
        sig.emplace( o.fluent_names, std::vector<std::string>{} );
    else
        throw error( "revise needs --domain or --fluents to fix the signature" );
    auto kappa = detail::parse_set_arg( "--belief", o.belief, *sig );
    auto alpha = detail::parse_set_arg( "--obs", o.obs, *sig );
    if ( kappa.empty() )
        throw error( "--belief denotes the empty belief state" );
    auto result = revise( kappa, alpha, detail::load_assignment( o.ranking, *sig ) );
    if ( detail::parse_format( o.format ) == output_format::text )
        return "result = " + format_state_set( result, *sig ) + "\n";
    return detail::dump( { { "signature", signature_to_json( *sig ) },
                           { "belief", state_set_to_json( kappa, *sig ) },
                           { "observation", state_set_to_json( alpha, *sig ) },
                           { "result", state_set_to_json( result, *sig ) } } );
}

inline std::string cmd_preimage( const options& o )
{
    auto dom = detail::load_domain( o.domain );
    const auto& sig = dom.sig();
    auto alpha = detail::parse_set_arg( "--obs", o.obs, sig );
    auto acts = detail::parse_actions( o.actions, sig );
    auto pre = preimage( alpha, acts, dom.ts );
    if ( detail::parse_format( o.format ) == output_format::text )
        return "preimage = " + format_state_set( pre, sig ) + "\n";
    return detail::dump( { { "signature", signature_to_json( sig ) },
                           { "observation", state_set_to_json( alpha, sig ) },
                           { "actions", detail::names_json( acts, sig ) },
                           { "preimage", state_set_to_json( pre, sig ) } } );
}

inline std::string cmd_repair( const options& o )
{
    auto dom = detail::load_domain( o.domain );
    auto scen = detail::load_scenario( o.scenario, dom );
    const auto& sig = dom.sig();
    bool ok = consistent( scen.view, dom.ts );
    auto reps = repairs( scen.view, dom.ts, scen.reliability );
    if ( detail::parse_format( o.format ) == output_format::text )
    {
        std::string out = std::string( ok ? "consistent" : "inconsistent" ) + " | repairs " +
                          std::to_string( reps.size() ) + "\n";
        for ( std::size_t i = 0; i < reps.size(); ++i )
            out += "repair " + std::to_string( i + 1 ) + " = " + format_observations( reps[ i ], sig ) + "\n";
        return out;
    }
    auto list = nlohmann::json::array();
    for ( const auto& r : reps )
        list.push_back( detail::observations_json( r, sig ) );
    return detail::dump( { { "signature", signature_to_json( sig ) },
                           { "scenario", detail::scenario_json( scen ) },
                           { "consistent", ok },
                           { "repairs", std::move( list ) } } );
}

inline suite_report run_suite( const options& o )
{
    scope sc;
    sc.fluents = o.fluents;
    sc.sampled = o.samples > 0;
    sc.samples = o.samples > 0 ? o.samples : 1000;
    sc.seed = o.seed.value_or( 0 );
    if ( !o.seed )
        if ( const char* env = std::getenv( "BEVO_SEED" ); env && *env )
            sc.seed = detail::parse_seed( env, "BEVO_SEED" );
    if ( sc.fluents == 0 )
        throw error( "--fluents must be at least 1" );
    auto d = dalal_assignment();
    if ( o.suite == "interaction" )
    {
        sc.max_length = o.max_length ? o.max_length : 2;
        return check_interaction_suite( evolution_change( d ), sc );
    }
    if ( o.suite == "i1i2" )
        return check_I1_I2_suite( combined_operator( d ), d, sc );
    if ( o.suite == "agm" )
        return check_agm( d, sc );
    if ( o.suite == "dp" )
        return check_dp_suite( evolution_iterated( d ), d, sc );
    if ( o.suite == "lehmann" )
    {
        sc.max_length = o.max_length ? o.max_length : 3;
        return check_lehmann( d, sc );
    }
    throw error( "unknown suite '" + o.suite + "' (expected interaction, agm, dp, lehmann or i1i2)" );
}

/// Entry point; argv[0] is the program name.
inline int run( int argc, const char* const* argv, std::ostream& out, std::ostream& err )
{
    options o;
    CLI::App app{ "Belief evolution: revision and update over transition systems", "bevo" };
    app.require_subcommand( 1 );
    app.set_help_all_flag( "--help-all", "Show help for every subcommand" );

    auto add_format = [ & ]( CLI::App* sub ) {
        sub->add_option( "--format", o.format, "Output format: text or machine" )->capture_default_str();
    };

    auto* evolve_cmd = app.add_subcommand( "evolve", "Evolve a scenario's initial beliefs through its world view" );
    evolve_cmd->add_option( "--domain", o.domain, "Domain file (.bevd)" )->required();
    evolve_cmd->add_option( "--scenario", o.scenario, "Scenario file (.bevs)" )->required();
    evolve_cmd->add_option( "--ranking", o.ranking, "dalal or a ranking file (.bevr)" )->capture_default_str();
    evolve_cmd->add_option( "--reliability", o.reliability, "Override the scenario: recency or constant" );
    evolve_cmd->add_option( "--mode", o.mode, "Override the scenario: credulous or skeptical" );
    add_format( evolve_cmd );

    auto* update_cmd = app.add_subcommand( "update", "Progress a belief state through actions" );
    update_cmd->add_option( "--domain", o.domain, "Domain file (.bevd)" )->required();
    update_cmd->add_option( "--belief", o.belief, "State-set literal or formula" )->required();
    update_cmd->add_option( "--actions", o.actions, "Action names, in order" )->required();
    add_format( update_cmd );

    auto* revise_cmd = app.add_subcommand( "revise", "Revise a belief state by an observation" );
    revise_cmd->add_option( "--belief", o.belief, "State-set literal or formula" )->required();
    revise_cmd->add_option( "--obs", o.obs, "State-set literal or formula" )->required();
    revise_cmd->add_option( "--domain", o.domain, "Domain file supplying the fluents" );
    revise_cmd->add_option( "--fluents", o.fluent_names, "Fluent names, when no domain is given" );
    revise_cmd->add_option( "--ranking", o.ranking, "dalal or a ranking file (.bevr)" )->capture_default_str();
    add_format( revise_cmd );

    auto* preimage_cmd = app.add_subcommand( "preimage", "States from which the actions end inside an observation" );
    preimage_cmd->add_option( "--domain", o.domain, "Domain file (.bevd)" )->required();
    preimage_cmd->add_option( "--obs", o.obs, "State-set literal or formula" )->required();
    preimage_cmd->add_option( "--actions", o.actions, "Action names, in order" )->required();
    add_format( preimage_cmd );

    auto* repair_cmd = app.add_subcommand( "repair", "List the repairs of a scenario's world view" );
    repair_cmd->add_option( "--domain", o.domain, "Domain file (.bevd)" )->required();
    repair_cmd->add_option( "--scenario", o.scenario, "Scenario file (.bevs)" )->required();
    add_format( repair_cmd );

    auto* check_cmd = app.add_subcommand( "check", "Run a postulate suite" );
    check_cmd->add_option( "--suite", o.suite, "interaction, agm, dp, lehmann or i1i2" )->required();
    check_cmd->add_option( "--fluents", o.fluents, "Number of fluents" )->capture_default_str();
    check_cmd->add_option( "--seed", o.seed, "Seed for sampled scopes (default: BEVO_SEED, else 0)" );
    check_cmd->add_option( "--samples", o.samples, "Sample this many instances instead of enumerating" );
    check_cmd->add_option( "--max-length", o.max_length,
                           "Longest action trajectory (interaction) or sequence (lehmann)" );
    add_format( check_cmd );

    auto* cex_cmd = app.add_subcommand( "counterexample", "Reproduce a fixed counterexample" );
    cex_cmd->add_option( "which", o.which, "lehmann" )->required();
    add_format( cex_cmd );

    try
    {
        app.parse( argc, argv );
    }
    catch ( const CLI::CallForHelp& e )
    {
        return app.exit( e, out, err );
    }
    catch ( const CLI::CallForAllHelp& e )
    {
        return app.exit( e, out, err );
    }
    catch ( const CLI::ParseError& e )
    {
        err << "bevo: " << e.what() << "\n";
        return exit_input;
    }

    try
    {
        std::string result;
        int code = exit_ok;
        if ( *evolve_cmd )
            result = cmd_evolve( o );
        else if ( *update_cmd )
            result = cmd_update( o );
        else if ( *revise_cmd )
            result = cmd_revise( o );
        else if ( *preimage_cmd )
            result = cmd_preimage( o );
        else if ( *repair_cmd )
            result = cmd_repair( o );
        else if ( *check_cmd )
        {
            auto format = detail::parse_format( o.format );
            auto rep = run_suite( o );
            result = format_report( rep, format );
            code = rep.passed() ? exit_ok : exit_violations;
        }
        else if ( *cex_cmd )
        {
            if ( o.which != "lehmann" )
                throw error( "unknown counterexample '" + o.which + "' (expected lehmann)" );
            auto format = detail::parse_format( o.format );
            auto rep = lehmann_counterexample();
            result = format_lehmann( rep, format );
            code = rep.reproduced() ? exit_ok : exit_violations;
        }
        out << result;
        out.flush();
        return code;
    }
    catch ( const std::exception& e )
    {
        err << "bevo: " << e.what() << "\n";
        return exit_input;
    }
}

} // namespace bevo::cli
