#include "oracle.hpp"

#include <gtest/gtest.h>

using namespace bevo;

namespace
{

signature litmus_sig() { return signature( { "Red", "Blue", "Acid" }, { "dip" } ); }

} // namespace

TEST( StateSet, BasicMembership )
{
    state_set s( 8 );
    EXPECT_TRUE( s.empty() );
    s.insert( 3 );
    s.insert( 7 );
    EXPECT_TRUE( s.contains( 3 ) );
    EXPECT_FALSE( s.contains( 4 ) );
    EXPECT_FALSE( s.contains( 100 ) );
    EXPECT_EQ( s.size(), 2u );
    s.erase( 3 );
    EXPECT_EQ( s.members(), std::vector<state_index>{ 7 } );
    EXPECT_THROW( s.insert( 8 ), error );
}

TEST( StateSet, FullAndComplementRespectUniverse )
{
    for ( std::size_t u : { 1u, 2u, 63u, 64u, 65u, 128u, 1000u } )
    {
        auto all = state_set::full( u );
        EXPECT_EQ( all.size(), u );
        EXPECT_TRUE( all.is_full() );
        EXPECT_TRUE( all.complement().empty() );
        EXPECT_EQ( state_set( u ).complement(), all );
    }
}

TEST( StateSet, AlgebraMatchesStdSet )
{
    std::mt19937_64 rng( 11 );
    for ( int trial = 0; trial < 200; ++trial )
    {
        const std::size_t u = 1 + rng() % 150;
        auto a = oracle::random_set( rng, u, false );
        auto b = oracle::random_set( rng, u, false );
        auto ma = oracle::members( a ), mb = oracle::members( b );
        std::vector<state_index> uni, inter, diff;
        std::set_union( ma.begin(), ma.end(), mb.begin(), mb.end(), std::back_inserter( uni ) );
        std::set_intersection( ma.begin(), ma.end(), mb.begin(), mb.end(), std::back_inserter( inter ) );
        std::set_difference( ma.begin(), ma.end(), mb.begin(), mb.end(), std::back_inserter( diff ) );
        EXPECT_EQ( ( a | b ).members(), uni );
        EXPECT_EQ( ( a & b ).members(), inter );
        EXPECT_EQ( ( a - b ).members(), diff );
        EXPECT_EQ( a.subset_of( b ), diff.empty() );
        EXPECT_EQ( a.intersects( b ), !inter.empty() );
        EXPECT_EQ( a.complement().size(), u - a.size() );
    }
}

TEST( StateSet, MismatchedUniversesThrow )
{
    state_set a( 4 ), b( 8 );
    EXPECT_THROW( (void)( a | b ), error );
    EXPECT_THROW( (void)a.subset_of( b ), error );
    EXPECT_NE( a, b );
}

TEST( StateSet, CanonicalOrderIsLexicographicOverMembers )
{
    auto s = []( std::initializer_list<state_index> m ) { return state_set( 4, m ); };
    EXPECT_LT( s( {} ), s( { 0 } ) );
    EXPECT_LT( s( { 0 } ), s( { 0, 1 } ) );
    EXPECT_LT( s( { 0, 3 } ), s( { 1 } ) );
    EXPECT_EQ( s( { 2, 1 } ) <=> s( { 1, 2 } ), std::strong_ordering::equal );
}

TEST( Signature, AppendsNullAction )
{
    auto sig = litmus_sig();
    EXPECT_EQ( sig.actions(), ( std::vector<std::string>{ "dip", "lambda" } ) );
    EXPECT_EQ( sig.null_action(), action_id{ 1 } );
    EXPECT_EQ( sig.state_count(), 8u );
    signature explicit_null( { "p" }, { "lambda", "go" } );
    EXPECT_EQ( explicit_null.actions().size(), 2u );
    EXPECT_EQ( explicit_null.null_action(), action_id{ 0 } );
}

TEST( Signature, RejectsBadNames )
{
    EXPECT_THROW( signature( {}, {} ), error );
    EXPECT_THROW( signature( { "p", "p" }, {} ), error );
    EXPECT_THROW( signature( { "p" }, { "a", "a" } ), error );
    EXPECT_THROW( signature( { "1p" }, {} ), error );
    EXPECT_THROW( signature( { "p-q" }, {} ), error );
    EXPECT_THROW( signature( { "lambda" }, {} ), error );
    EXPECT_NO_THROW( signature( { "_x9" }, {} ) );
}

TEST( Signature, FluentLimit )
{
    EXPECT_NO_THROW( signature( fluent_names( max_fluents ), {} ) );
    EXPECT_THROW( signature( fluent_names( max_fluents + 1 ), {} ), error );
}

TEST( Signature, StateEncodingRoundTrips )
{
    auto sig = litmus_sig();
    for ( state_index s = 0; s < sig.state_count(); ++s )
    {
        auto names = sig.true_fluents( s );
        EXPECT_EQ( sig.state_of( names ), s );
        EXPECT_EQ( names.size(), static_cast<std::size_t>( std::popcount( s ) ) );
    }
    std::vector<std::string> red_acid{ "Acid", "Red" };
    EXPECT_EQ( sig.state_of( red_acid ), 0b101u );
    std::vector<std::string> bogus{ "Bogus" };
    EXPECT_THROW( (void)sig.state_of( bogus ), error );
    EXPECT_THROW( (void)sig.action( "jump" ), error );
    EXPECT_FALSE( sig.find_fluent( "Bogus" ) );
}

TEST( TransitionSystem, SelfLoopCompletion )
{
    auto sig = litmus_sig();
    auto dip = sig.action( "dip" );
    std::vector<transition> rel{ { 0, dip, 0b010 }, { 0b100, dip, 0b101 } };
    auto ts = complete_transitions( sig, rel );
    EXPECT_TRUE( ts.deterministic() );
    EXPECT_EQ( ts.successor( 0, dip ), 0b010u );
    EXPECT_EQ( ts.successor( 0b100, dip ), 0b101u );
    for ( state_index s = 0; s < 8; ++s )
    {
        EXPECT_EQ( ts.successor( s, sig.null_action() ), s );
        if ( s != 0 && s != 0b100 )
        {
            EXPECT_EQ( ts.successor( s, dip ), s );
        }
    }
    std::size_t moving = 0;
    for ( const auto& t : ts.relation() )
        moving += t.from != t.to;
    EXPECT_EQ( moving, 2u );
}

TEST( TransitionSystem, PureIdentityWithoutTransitions )
{
    signature sig( { "p" }, {} );
    auto ts = complete_transitions( sig, {} );
    EXPECT_TRUE( ts.deterministic() );
    for ( const auto& t : ts.relation() )
        EXPECT_EQ( t.from, t.to );
}

TEST( TransitionSystem, RejectsNonIdentityNullTransition )
{
    auto sig = litmus_sig();
    std::vector<transition> rel{ { 0, sig.null_action(), 1 } };
    EXPECT_THROW( complete_transitions( sig, rel ), error );
    std::vector<transition> ok{ { 2, sig.null_action(), 2 } };
    EXPECT_NO_THROW( complete_transitions( sig, ok ) );
}

TEST( TransitionSystem, StrictRequiresEveryPair )
{
    signature sig( { "p" }, { "a" } );
    std::vector<transition> partial{ { 0, action_id{ 0 }, 1 } };
    EXPECT_THROW( complete_transitions( sig, partial, completion::strict ), error );
    std::vector<transition> total{ { 0, action_id{ 0 }, 1 }, { 1, action_id{ 0 }, 1 } };
    EXPECT_NO_THROW( complete_transitions( sig, total, completion::strict ) );
}

TEST( TransitionSystem, RejectsOutOfRangeStatesAndActions )
{
    signature sig( { "p" }, { "a" } );
    std::vector<transition> bad_state{ { 0, action_id{ 0 }, 2 } };
    EXPECT_THROW( complete_transitions( sig, bad_state ), error );
    std::vector<transition> bad_action{ { 0, action_id{ 7 }, 1 } };
    EXPECT_THROW( complete_transitions( sig, bad_action ), error );
}

TEST( TransitionSystem, DeterminismDetection )
{
    signature sig( { "p" }, { "a" } );
    std::vector<transition> branching{ { 0, action_id{ 0 }, 0 }, { 0, action_id{ 0 }, 1 } };
    auto ts = complete_transitions( sig, branching );
    EXPECT_FALSE( is_deterministic( ts ) );
    EXPECT_THROW( ts.require_deterministic(), nondeterministic_error );
    EXPECT_EQ( ts.successors( 0, action_id{ 0 } ).size(), 2u );
    std::vector<transition> duplicate{ { 0, action_id{ 0 }, 1 }, { 0, action_id{ 0 }, 1 } };
    EXPECT_TRUE( is_deterministic( complete_transitions( sig, duplicate ) ) );
}

TEST( TransitionSystem, CompletionIsTotalAndKeepsListedTransitions )
{
    std::mt19937_64 rng( 5 );
    for ( int trial = 0; trial < 100; ++trial )
    {
        const std::size_t fluents = 1 + rng() % 3;
        signature sig( fluent_names( fluents ), { "a", "b" } );
        std::vector<transition> rel;
        std::map<std::pair<state_index, std::uint32_t>, std::set<state_index>> listed;
        for ( int k = 0; k < 6; ++k )
        {
            transition t{ static_cast<state_index>( rng() % sig.state_count() ), action_id{ static_cast<std::uint32_t>( rng() % 2 ) },
                          static_cast<state_index>( rng() % sig.state_count() ) };
            rel.push_back( t );
            listed[ { t.from, t.action.value } ].insert( t.to );
        }
        auto ts = complete_transitions( sig, rel );
        bool det = true;
        for ( std::uint32_t a = 0; a < 3; ++a )
            for ( state_index s = 0; s < sig.state_count(); ++s )
            {
                auto succ = ts.successors( s, action_id{ a } );
                std::set<state_index> got( succ.begin(), succ.end() );
                auto it = listed.find( { s, a } );
                std::set<state_index> want = it == listed.end() ? std::set<state_index>{ s } : it->second;
                EXPECT_EQ( got, want );
                det = det && want.size() == 1;
            }
        EXPECT_EQ( ts.deterministic(), det );
    }
}
