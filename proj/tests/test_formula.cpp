#include "oracle.hpp"

#include <gtest/gtest.h>

using namespace bevo;

namespace
{

// Truth-table evaluation from fluent names.
bool truth( const formula& f, const std::set<std::string>& true_names )
{
    switch ( f.op() )
    {
    case formula::kind::atom: return true_names.count( f.name() ) > 0;
    case formula::kind::negation: return !truth( f.lhs(), true_names );
    case formula::kind::conjunction: return truth( f.lhs(), true_names ) && truth( f.rhs(), true_names );
    case formula::kind::disjunction: return truth( f.lhs(), true_names ) || truth( f.rhs(), true_names );
    case formula::kind::implication: return !truth( f.lhs(), true_names ) || truth( f.rhs(), true_names );
    case formula::kind::equivalence: return truth( f.lhs(), true_names ) == truth( f.rhs(), true_names );
    }
    return false;
}

formula random_formula( std::mt19937_64& rng, const signature& sig, int depth )
{
    if ( depth == 0 || rng() % 4 == 0 )
        return formula::atom( sig.fluents()[ rng() % sig.fluent_count() ] );
    switch ( rng() % 6 )
    {
    case 0: return formula::negation( random_formula( rng, sig, depth - 1 ) );
    case 1: return formula::conjunction( random_formula( rng, sig, depth - 1 ), random_formula( rng, sig, depth - 1 ) );
    case 2: return formula::disjunction( random_formula( rng, sig, depth - 1 ), random_formula( rng, sig, depth - 1 ) );
    case 3: return formula::implication( random_formula( rng, sig, depth - 1 ), random_formula( rng, sig, depth - 1 ) );
    default: return formula::equivalence( random_formula( rng, sig, depth - 1 ), random_formula( rng, sig, depth - 1 ) );
    }
}

} // namespace

TEST( Formula, ModelsOfAtom )
{
    signature sig( { "Red", "Blue", "Acid" }, {} );
    auto red = models( formula::atom( "Red" ), sig );
    EXPECT_EQ( red.size(), 4u );
    red.for_each( [ & ]( state_index s ) { EXPECT_TRUE( sig.holds( s, 0 ) ); } );
}

TEST( Formula, WhiteObservation )
{
    signature sig( { "Red", "Blue", "Acid", "Litmus" }, {} );
    auto white = models( formula::conjunction( formula::negation( formula::atom( "Red" ) ),
                                               formula::negation( formula::atom( "Blue" ) ) ),
                         sig );
    std::vector<std::vector<std::string>> expected{ {}, { "Acid" }, { "Litmus" }, { "Acid", "Litmus" } };
    state_set want = sig.no_states();
    for ( const auto& e : expected )
        want.insert( sig.state_of( e ) );
    EXPECT_EQ( white, want );
}

TEST( Formula, UnknownAtomIsAnError )
{
    signature sig( { "p" }, {} );
    EXPECT_THROW( models( formula::atom( "q" ), sig ), error );
}

TEST( Formula, EvaluationMatchesTruthTable )
{
    std::mt19937_64 rng( 3 );
    signature sig( { "p", "q", "r" }, {} );
    for ( int trial = 0; trial < 300; ++trial )
    {
        auto f = random_formula( rng, sig, 4 );
        auto m = models( f, sig );
        for ( state_index s = 0; s < sig.state_count(); ++s )
            EXPECT_EQ( m.contains( s ), truth( f, oracle::names_of( sig, s ) ) ) << f.to_string();
    }
}

TEST( Formula, RenderingReparsesToSameModels )
{
    std::mt19937_64 rng( 4 );
    signature sig( { "p", "q", "r" }, {} );
    for ( int trial = 0; trial < 300; ++trial )
    {
        auto f = random_formula( rng, sig, 4 );
        EXPECT_EQ( models( parse_formula( f.to_string() ), sig ), models( f, sig ) ) << f.to_string();
    }
}
