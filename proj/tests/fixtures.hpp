#pragma once

// The litmus domains built directly through the kernel API, so tests do not
// depend on the parser.

#include <bevo/bevo.hpp>

#include <string>
#include <vector>

namespace fixtures
{

using namespace bevo;
using names = std::vector<std::string>;

struct world
{
    signature sig;
    transition_system ts;

    [[nodiscard]] state_index st( const names& n ) const { return sig.state_of( n ); }
    [[nodiscard]] state_set set( const std::vector<names>& states ) const
    {
        auto out = sig.no_states();
        for ( const auto& s : states )
            out.insert( st( s ) );
        return out;
    }
    [[nodiscard]] action_id act( const std::string& name ) const { return sig.action( name ); }
};

inline world litmus()
{
    signature sig( { "Red", "Blue", "Acid" }, { "dip" } );
    auto dip = sig.action( "dip" );
    std::vector<transition> rel{ { sig.state_of( names{} ), dip, sig.state_of( names{ "Blue" } ) },
                                 { sig.state_of( names{ "Acid" } ), dip, sig.state_of( names{ "Red", "Acid" } ) } };
    auto ts = complete_transitions( sig, rel );
    return { sig, ts };
}

inline world extended_litmus()
{
    signature sig( { "Red", "Blue", "Acid", "Litmus" }, { "dip" } );
    auto dip = sig.action( "dip" );
    std::vector<transition> rel{
            { sig.state_of( names{ "Litmus" } ), dip, sig.state_of( names{ "Litmus", "Blue" } ) },
            { sig.state_of( names{ "Litmus", "Acid" } ), dip, sig.state_of( names{ "Litmus", "Red", "Acid" } ) } };
    auto ts = complete_transitions( sig, rel );
    return { sig, ts };
}

} // namespace fixtures
