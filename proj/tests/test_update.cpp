#include "oracle.hpp"

#include <gtest/gtest.h>

using namespace bevo;

namespace
{

struct litmus
{
    signature sig{ { "Red", "Blue", "Acid" }, { "dip" } };
    action_id dip = sig.action( "dip" );
    transition_system ts = complete_transitions(
            sig, std::vector<transition>{ { st( {} ), dip, st( { "Blue" } ) }, { st( { "Acid" } ), dip, st( { "Red", "Acid" } ) } } );

    state_index st( std::vector<std::string> names ) const { return sig.state_of( names ); }
    state_set set( std::vector<std::vector<std::string>> states ) const
    {
        auto out = sig.no_states();
        for ( const auto& s : states )
            out.insert( st( s ) );
        return out;
    }
};

} // namespace

TEST( Update, LitmusDip )
{
    litmus l;
    EXPECT_EQ( update( l.set( { {}, { "Acid" } } ), l.dip, l.ts ), l.set( { { "Blue" }, { "Red", "Acid" } } ) );
}

TEST( Update, EmptyStaysEmpty )
{
    litmus l;
    EXPECT_TRUE( update( l.sig.no_states(), l.dip, l.ts ).empty() );
}

TEST( Update, NullActionIsIdentity )
{
    litmus l;
    std::mt19937_64 rng( 1 );
    for ( int i = 0; i < 50; ++i )
    {
        auto k = oracle::random_set( rng, 8, false );
        EXPECT_EQ( update( k, l.sig.null_action(), l.ts ), k );
    }
}

TEST( Update, SequenceComposes )
{
    litmus l;
    auto k = l.set( { {}, { "Acid" } } );
    action_trajectory two{ l.dip, l.dip };
    EXPECT_EQ( update_seq( k, two, l.ts ), update( update( k, l.dip, l.ts ), l.dip, l.ts ) );
    EXPECT_EQ( update_seq( k, {}, l.ts ), k );
    EXPECT_EQ( successor( l.st( {} ), two, l.ts ), l.set( { { "Blue" } } ) );
}

TEST( Update, ErrorsOnMismatchedInputs )
{
    litmus l;
    EXPECT_THROW( update( state_set( 4 ), l.dip, l.ts ), error );
    EXPECT_THROW( update( l.sig.no_states(), action_id{ 9 }, l.ts ), error );
    EXPECT_THROW( update_seq( state_set( 4 ), {}, l.ts ), error );
}

TEST( Update, MatchesRelationOracleOnNondeterministicSystems )
{
    std::mt19937_64 rng( 2 );
    for ( int trial = 0; trial < 200; ++trial )
    {
        auto ts = oracle::random_system( rng, 1 + rng() % 3, false );
        auto k = oracle::random_set( rng, ts.state_count(), false );
        action_trajectory acts;
        for ( std::size_t n = rng() % 4; n > 0; --n )
            acts.push_back( action_id{ static_cast<std::uint32_t>( rng() % 3 ) } );
        EXPECT_EQ( update_seq( k, acts, ts ), oracle::progress( ts, k, acts ) );
    }
}

TEST( Update, DistributesOverUnion )
{
    std::mt19937_64 rng( 3 );
    for ( int trial = 0; trial < 200; ++trial )
    {
        auto ts = oracle::random_system( rng, 2, false );
        auto x = oracle::random_set( rng, 4, false );
        auto y = oracle::random_set( rng, 4, false );
        action_id a{ static_cast<std::uint32_t>( rng() % 2 ) };
        EXPECT_EQ( update( x | y, a, ts ), update( x, a, ts ) | update( y, a, ts ) );
        EXPECT_TRUE( update( x & y, a, ts ).subset_of( update( x, a, ts ) ) );
    }
}
