#pragma once

#include "aggregation.hpp"
#include "chains.hpp"
#include "lcomplete.hpp"
#include "machine.hpp"
#include "polygon.hpp"

#include <json.hpp>

#include <fstream>
#include <limits>
#include <sstream>
#include <string>

namespace svest::io
{

using json = nlohmann::json;

[[nodiscard]] inline json read_json_file( const std::string& path )
{
    std::ifstream in( path );
    if ( !in )
        throw error( "cannot open " + path );
    try
    {
        return json::parse( in );
    }
    catch ( const json::parse_error& e )
    {
        throw error( path + ": " + e.what() );
    }
}

inline void write_json_file( const std::string& path, const json& value )
{
    std::ofstream out( path );
    if ( !out )
        throw error( "cannot write " + path );
    out << value.dump( 2 ) << '\n';
}

// {"states":[...], "alphabet":[...], "transitions":[["src","sym","tgt"],...], "initial":[...]}
[[nodiscard]] inline machine_description parse_machine( const json& j )
{
    try
    {
        machine_description desc;
        desc.states = j.at( "states" ).get< std::vector< std::string > >();
        desc.alphabet = j.at( "alphabet" ).get< std::vector< std::string > >();
        for ( const auto& t : j.at( "transitions" ) )
        {
            if ( !t.is_array() || t.size() != 3 )
                throw error( "transition must be [source, symbol, target]" );
            desc.transitions.push_back( { t[ 0 ].get< std::string >(), t[ 1 ].get< std::string >(),
                                          t[ 2 ].get< std::string >() } );
        }
        if ( j.contains( "initial" ) )
            desc.initial = j.at( "initial" ).get< std::vector< std::string > >();
        return desc;
    }
    catch ( const json::exception& e )
    {
        throw error( std::string( "malformed machine: " ) + e.what() );
    }
}

[[nodiscard]] inline json to_json( const finite_state_machine& m )
{
    json transitions = json::array();
    for ( const auto& t : m.transitions() )
        transitions.push_back( { m.name( t.source ), m.name( t.symbol ), m.name( t.target ) } );
    return { { "states", m.state_names() },
             { "alphabet", m.alphabet() },
             { "transitions", std::move( transitions ) },
             { "initial", m.names( m.initial() ) } };
}

[[nodiscard]] inline finite_state_machine read_machine( const std::string& path )
{
    return finite_state_machine( parse_machine( read_json_file( path ) ) );
}

// {"p":2, "functions":[{"map":{"a1":"c1.d1.0", ...}}, ...]}
[[nodiscard]] inline json to_json( const aggregation_suite& suite )
{
    json functions = json::array();
    for ( const auto& f : suite )
        functions.push_back( { { "map", f.mapping() } } );
    return { { "p", suite.size() }, { "functions", std::move( functions ) } };
}

[[nodiscard]] inline aggregation_suite parse_suite( const json& j, const std::vector< std::string >& alphabet )
{
    try
    {
        std::vector< aggregation_function > functions;
        for ( const auto& f : j.at( "functions" ) )
            functions.push_back( aggregation_function::from_names(
                    alphabet, f.at( "map" ).get< std::map< std::string, std::string > >() ) );
        if ( j.contains( "p" ) && j.at( "p" ).get< std::size_t >() != functions.size() )
            throw error( "suite declares p = " + j.at( "p" ).dump() + " but lists "
                         + std::to_string( functions.size() ) + " functions" );
        return aggregation_suite( std::move( functions ) );
    }
    catch ( const json::exception& e )
    {
        throw error( std::string( "malformed suite: " ) + e.what() );
    }
}

[[nodiscard]] inline json to_json( const finite_state_machine& m, const state_set& s )
{
    return m.names( s );
}

[[nodiscard]] inline json to_json( const finite_state_machine& m, const chain_partition& partition )
{
    json blocks = json::array();
    for ( const auto& b : partition.blocks )
    {
        json symbols = json::array();
        for ( auto w : b.symbols )
            symbols.push_back( m.name( w ) );
        json transitions = json::array();
        for ( const auto& t : b.transitions )
            transitions.push_back( { m.name( t.source ), m.name( t.symbol ), m.name( t.target ) } );
        blocks.push_back( { { "symbols", std::move( symbols ) }, { "transitions", std::move( transitions ) } } );
    }
    return { { "blocks", std::move( blocks ) } };
}

// Integers when they fit in 64 bits, decimal strings otherwise.
[[nodiscard]] inline json to_json( const mpz_class& z )
{
    if ( z.fits_slong_p() )
        return static_cast< std::int64_t >( z.get_si() );
    return z.get_str();
}

[[nodiscard]] inline json to_json( const rational& q )
{
    return json::array( { to_json( mpz_class( q.get_num() ) ), to_json( mpz_class( q.get_den() ) ) } );
}

// Vertex list [[[num, den], [num, den]], ...], counter-clockwise.
[[nodiscard]] inline json to_json( const polygon& p )
{
    json vertices = json::array();
    for ( const auto& v : p.vertices() )
        vertices.push_back( json::array( { to_json( v.x ), to_json( v.y ) } ) );
    return vertices;
}

[[nodiscard]] inline rational parse_rational( const json& j )
{
    auto integer = []( const json& v ) {
        if ( v.is_number_integer() )
            return mpz_class( std::to_string( v.get< std::int64_t >() ) );
        return mpz_class( v.get< std::string >() );
    };
    if ( j.is_array() && j.size() == 2 )
    {
        rational q( integer( j[ 0 ] ), integer( j[ 1 ] ) );
        if ( q.get_den() == 0 )
            throw error( "zero denominator" );
        q.canonicalize();
        return q;
    }
    if ( j.is_number_integer() )
        return rational( integer( j ) );
    if ( j.is_string() )
    {
        rational q( j.get< std::string >() );
        q.canonicalize();
        return q;
    }
    throw error( "cannot read rational from " + j.dump() );
}

[[nodiscard]] inline polygon parse_polygon( const json& j )
{
    std::vector< point > points;
    for ( const auto& v : j )
        points.push_back( { parse_rational( v.at( 0 ) ), parse_rational( v.at( 1 ) ) } );
    return polygon::hull( std::move( points ) );
}

// {"ell":2, "kind":..., "alphabet":[...], "states":[{"window":[...], "annotation":...}],
//  "initial":[...], "transitions":[[from, "symbol", to], ...]}
template < transition_system S, class Names, class Annotate >
[[nodiscard]] json to_json( const lcomplete_automaton< S >& a, const Names& alphabet, const std::string& kind,
                            Annotate annotate )
{
    json states = json::array();
    for ( std::uint32_t s = 0; s < a.state_count(); ++s )
    {
        json window = json::array();
        for ( auto w : a.window( s ) )
            window.push_back( alphabet[ index( w ) ] );
        states.push_back( { { "window", std::move( window ) }, { "annotation", annotate( a.annotation( s ) ) } } );
    }
    json initial = json::array();
    for ( std::uint32_t w = 0; w < a.alphabet_size(); ++w )
        if ( a.initial( symbol_id{ w } ) != a.npos )
            initial.push_back( a.initial( symbol_id{ w } ) );
    json transitions = json::array();
    for ( const auto& t : a.transitions() )
        transitions.push_back( json::array( { t.from, alphabet[ index( t.symbol ) ], t.to } ) );
    return { { "ell", a.ell() },   { "kind", kind },       { "alphabet", alphabet },
             { "states", states }, { "initial", initial }, { "transitions", transitions } };
}

[[nodiscard]] inline lcomplete_shape parse_lcomplete_shape( const json& j )
{
    try
    {
        lcomplete_shape shape;
        shape.ell = j.at( "ell" ).get< std::size_t >();
        const auto alphabet = j.at( "alphabet" ).get< std::vector< std::string > >();
        shape.alphabet_size = alphabet.size();
        std::map< std::string, std::uint32_t > symbol_index;
        for ( std::size_t i = 0; i < alphabet.size(); ++i )
            symbol_index.emplace( alphabet[ i ], static_cast< std::uint32_t >( i ) );

        std::map< std::string, std::size_t > interned;
        for ( const auto& s : j.at( "states" ) )
        {
            const auto length = s.at( "window" ).size();
            if ( length == 0 || length > shape.ell )
                throw error( "window length out of range" );
            shape.window_length.push_back( length );
            const auto& annotation = s.at( "annotation" );
            shape.annotation_size.push_back( annotation.size() );
            auto [ it, inserted ] = interned.emplace( annotation.dump(), interned.size() );
            shape.annotation_id.push_back( it->second );
        }
        for ( const auto& t : j.at( "transitions" ) )
        {
            const auto from = t.at( 0 ).get< std::uint32_t >();
            const auto to = t.at( 2 ).get< std::uint32_t >();
            const auto sym = symbol_index.find( t.at( 1 ).get< std::string >() );
            if ( sym == symbol_index.end() )
                throw unknown_symbol_error( t.at( 1 ).get< std::string >() );
            if ( from >= shape.window_length.size() || to >= shape.window_length.size() )
                throw error( "transition references unknown state" );
            shape.transitions.push_back( { from, symbol_id{ sym->second }, to } );
        }
        return shape;
    }
    catch ( const json::exception& e )
    {
        throw error( std::string( "malformed automaton: " ) + e.what() );
    }
}

[[nodiscard]] inline json to_json( const complexity_report& r )
{
    json per_length = json::array();
    for ( const auto& b : r.per_length )
        per_length.push_back( { { "length", b.length }, { "states", b.states }, { "n_chi", b.annotation_size } } );
    return { { "convention", to_string( r.convention ) },
             { "states", r.state_count },
             { "n_chi", r.annotation_size },
             { "n_chi_distinct", r.interned_size },
             { "per_length", std::move( per_length ) } };
}

} // namespace svest::io
