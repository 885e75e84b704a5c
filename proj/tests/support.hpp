#pragma once

// Fixtures, random generators and brute-force oracles shared by the test binaries.
// Nothing here calls the recursive estimator.

#include <svest/aggregation.hpp>
#include <svest/machine.hpp>
#include <svest/polygon.hpp>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace svest::test
{

inline machine_description m1_description()
{
    return { { "s1", "s2", "s3" },
             { "a", "b" },
             { { "s1", "a", "s2" }, { "s2", "a", "s3" }, { "s2", "b", "s1" }, { "s3", "b", "s1" } },
             std::nullopt };
}

// Chain-decomposable with blocks {a1,b1}, {a2,b2}.
inline machine_description m2_description()
{
    return { { "x1", "x2", "x3", "x4" },
             { "a1", "b1", "a2", "b2" },
             { { "x1", "a1", "x2" }, { "x1", "a1", "x3" }, { "x4", "b1", "x1" }, { "x2", "a2", "x4" },
               { "x3", "b2", "x1" } },
             std::nullopt };
}

// s2 emits both b and c, so a suite splitting {a,b}/{c,d} and {a,c}/{b,d} cannot rule it out on "a".
inline machine_description m3_description()
{
    return { { "s1", "s2" },
             { "a", "b", "c", "d" },
             { { "s1", "a", "s1" }, { "s2", "b", "s1" }, { "s2", "c", "s2" }, { "s1", "d", "s2" } },
             std::nullopt };
}

inline finite_state_machine m1() { return finite_state_machine( m1_description() ); }
inline finite_state_machine m2() { return finite_state_machine( m2_description() ); }
inline finite_state_machine m3() { return finite_state_machine( m3_description() ); }

inline std::vector< std::string > names( const finite_state_machine& m, const std::vector< symbol_id >& w )
{
    std::vector< std::string > result;
    for ( auto s : w )
        result.push_back( m.name( s ) );
    return result;
}

// Every string over an alphabet of `symbols` letters with length in [1, max_length].
inline std::vector< std::vector< symbol_id > > all_strings( std::size_t symbols, std::size_t max_length )
{
    std::vector< std::vector< symbol_id > > result;
    std::vector< std::vector< symbol_id > > level{ {} };
    for ( std::size_t len = 1; len <= max_length; ++len )
    {
        std::vector< std::vector< symbol_id > > next;
        for ( const auto& prefix : level )
            for ( std::uint32_t w = 0; w < symbols; ++w )
            {
                auto s = prefix;
                s.push_back( symbol_id{ w } );
                next.push_back( s );
            }
        result.insert( result.end(), next.begin(), next.end() );
        level = std::move( next );
    }
    return result;
}

inline std::vector< std::string > numbered( const std::string& prefix, std::size_t n )
{
    std::vector< std::string > names;
    for ( std::size_t i = 0; i < n; ++i )
        names.push_back( prefix + std::to_string( i ) );
    return names;
}

inline std::size_t uniform( std::mt19937& rng, std::size_t lo, std::size_t hi )
{
    return std::uniform_int_distribution< std::size_t >( lo, hi )( rng );
}

// Non-blocking machine with |X| <= max_states, |W| <= max_symbols.
inline finite_state_machine random_machine( std::mt19937& rng, std::size_t max_states = 8, std::size_t max_symbols = 6 )
{
    const std::size_t n = uniform( rng, 1, max_states );
    const std::size_t m = uniform( rng, 1, max_symbols );
    std::vector< transition > transitions;
    for ( std::uint32_t s = 0; s < n; ++s )
    {
        const std::size_t out = uniform( rng, 1, 3 );
        for ( std::size_t i = 0; i < out; ++i )
            transitions.push_back( { state_id{ s }, symbol_id{ static_cast< std::uint32_t >( uniform( rng, 0, m - 1 ) ) },
                                     state_id{ static_cast< std::uint32_t >( uniform( rng, 0, n - 1 ) ) } } );
    }
    return { numbered( "x", n ), numbered( "w", m ), std::move( transitions ) };
}

// Chain-decomposable by construction: symbols are split into r blocks; inside a block every
// state emits at most one block symbol and is entered from at most one source.
inline finite_state_machine random_chain_machine( std::mt19937& rng, std::size_t max_states = 8,
                                                  std::size_t max_symbols = 6 )
{
    for ( ;; )
    {
        const std::size_t n = uniform( rng, 2, max_states );
        const std::size_t m = uniform( rng, 2, max_symbols );
        const std::size_t r = uniform( rng, 1, std::min< std::size_t >( m, 3 ) );
        std::vector< std::vector< std::uint32_t > > blocks( r );
        for ( std::uint32_t w = 0; w < m; ++w )
            blocks[ w < r ? w : uniform( rng, 0, r - 1 ) ].push_back( w );

        std::vector< transition > transitions;
        std::vector< bool > has_out( n, false );
        for ( const auto& block : blocks )
        {
            std::vector< int > emits( n, -1 );
            for ( std::size_t s = 0; s < n; ++s )
                if ( uniform( rng, 0, 3 ) != 0 )
                    emits[ s ] = static_cast< int >( block[ uniform( rng, 0, block.size() - 1 ) ] );
            std::vector< std::uint32_t > sources;
            for ( std::uint32_t s = 0; s < n; ++s )
                if ( emits[ s ] >= 0 )
                    sources.push_back( s );
            if ( sources.empty() )
                continue;
            // Each target gets at most one source; every source gets at least one target when possible.
            std::vector< std::uint32_t > targets( n );
            std::iota( targets.begin(), targets.end(), 0u );
            std::shuffle( targets.begin(), targets.end(), rng );
            for ( std::size_t i = 0; i < targets.size(); ++i )
            {
                std::uint32_t src;
                if ( i < sources.size() )
                    src = sources[ i ];
                else if ( uniform( rng, 0, 2 ) == 0 )
                    src = sources[ uniform( rng, 0, sources.size() - 1 ) ];
                else
                    continue;
                transitions.push_back( { state_id{ src }, symbol_id{ static_cast< std::uint32_t >( emits[ src ] ) },
                                         state_id{ targets[ i ] } } );
                has_out[ src ] = true;
            }
        }
        if ( std::all_of( has_out.begin(), has_out.end(), []( bool b ) { return b; } ) )
            return { numbered( "x", n ), numbered( "w", m ), std::move( transitions ) };
    }
}

// Deterministic I/S/O machine, W = U x Y: every input permutes X and each (state, input)
// has one output.
struct iso_machine
{
    finite_state_machine machine;
    std::size_t inputs;
    std::size_t outputs;
};

inline iso_machine random_iso_machine( std::mt19937& rng )
{
    const std::size_t n = uniform( rng, 2, 6 );
    const std::size_t u = uniform( rng, 1, 2 );
    const std::size_t y = uniform( rng, 2, 3 );
    std::vector< std::string > alphabet;
    for ( std::size_t i = 0; i < u; ++i )
        for ( std::size_t j = 0; j < y; ++j )
            alphabet.push_back( "u" + std::to_string( i ) + "y" + std::to_string( j ) );
    std::vector< transition > transitions;
    for ( std::size_t i = 0; i < u; ++i )
    {
        std::vector< std::uint32_t > perm( n );
        std::iota( perm.begin(), perm.end(), 0u );
        std::shuffle( perm.begin(), perm.end(), rng );
        for ( std::uint32_t s = 0; s < n; ++s )
        {
            const auto out = uniform( rng, 0, y - 1 );
            transitions.push_back(
                    { state_id{ s }, symbol_id{ static_cast< std::uint32_t >( i * y + out ) }, state_id{ perm[ s ] } } );
        }
    }
    return { finite_state_machine( numbered( "x", n ), alphabet, std::move( transitions ) ), u, y };
}

// Assigns every symbol a distinct random p-tuple; consistent by construction.
inline aggregation_suite random_consistent_suite( std::mt19937& rng, const std::vector< std::string >& alphabet,
                                                  std::size_t p )
{
    const std::size_t n = alphabet.size();
    std::size_t radix = 1;
    auto capacity = [ & ]( std::size_t b ) {
        std::size_t c = 1;
        for ( std::size_t k = 0; k < p; ++k )
            c *= b;
        return c;
    };
    while ( capacity( radix ) < n )
        ++radix;
    radix += uniform( rng, 0, 1 );

    std::vector< std::vector< std::size_t > > tuples;
    std::set< std::vector< std::size_t > > used;
    while ( tuples.size() < n )
    {
        std::vector< std::size_t > t( p );
        for ( auto& d : t )
            d = uniform( rng, 0, radix - 1 );
        if ( used.insert( t ).second )
            tuples.push_back( t );
    }

    std::vector< aggregation_function > functions;
    for ( std::size_t k = 0; k < p; ++k )
    {
        std::map< std::string, std::string > mapping;
        for ( std::size_t w = 0; w < n; ++w )
            mapping[ alphabet[ w ] ] = "k" + std::to_string( k + 1 ) + "." + std::to_string( tuples[ w ][ k ] );
        functions.push_back( aggregation_function::from_names( alphabet, mapping ) );
    }
    return aggregation_suite( std::move( functions ) );
}

// V_k = U x B_k(Y) for a random consistent decomposition B of the outputs.
inline aggregation_suite random_output_suite( std::mt19937& rng, const iso_machine& iso, std::size_t p )
{
    const auto outputs = numbered( "y", iso.outputs );
    const auto inner = random_consistent_suite( rng, outputs, p );
    std::vector< aggregation_function > functions;
    for ( std::size_t k = 0; k < p; ++k )
    {
        std::map< std::string, std::string > mapping;
        for ( std::size_t i = 0; i < iso.inputs; ++i )
            for ( std::size_t j = 0; j < iso.outputs; ++j )
                mapping[ "u" + std::to_string( i ) + "y" + std::to_string( j ) ] =
                        "u" + std::to_string( i ) + "/" + inner[ k ].codomain()[ index( inner[ k ]( symbol_id{
                                static_cast< std::uint32_t >( j ) } ) ) ];
        functions.push_back( aggregation_function::from_names( iso.machine.alphabet(), mapping ) );
    }
    return aggregation_suite( std::move( functions ) );
}

// Absolute injectivity of a set-valued map: f(a) & f(b) != {} implies a == b.
template < class Key >
bool absolutely_injective( const std::map< Key, std::set< std::uint32_t > >& f )
{
    for ( auto a = f.begin(); a != f.end(); ++a )
        for ( auto b = std::next( a ); b != f.end(); ++b )
            for ( auto x : a->second )
                if ( b->second.count( x ) )
                    return false;
    return true;
}

// Chain test through the set maps chi|_Omega and rho_hat_Omega on chi(Omega).
inline bool chain_by_injectivity( const finite_state_machine& m, const std::vector< symbol_id >& block )
{
    std::set< std::uint32_t > in_block;
    for ( auto w : block )
        in_block.insert( index( w ) );
    std::map< std::uint32_t, std::set< std::uint32_t > > chi;     // symbol -> sources
    std::map< std::uint32_t, std::set< std::uint32_t > > post;    // source -> targets
    for ( const auto& t : m.transitions() )
    {
        if ( !in_block.count( index( t.symbol ) ) )
            continue;
        chi[ index( t.symbol ) ].insert( index( t.source ) );
        post[ index( t.source ) ].insert( index( t.target ) );
    }
    return absolutely_injective( chi ) && absolutely_injective( post );
}

// ---- geometry oracle -------------------------------------------------------

inline rational cross( const point& o, const point& a, const point& b )
{
    rational r = ( a.x - o.x ) * ( b.y - o.y ) - ( a.y - o.y ) * ( b.x - o.x );
    return r;
}

inline bool on_segment( const point& a, const point& b, const point& p )
{
    return sgn( cross( a, b, p ) ) == 0 && std::min( a.x, b.x ) <= p.x && p.x <= std::max( a.x, b.x )
           && std::min( a.y, b.y ) <= p.y && p.y <= std::max( a.y, b.y );
}

// Membership by orientation against every edge (closed set), handling degenerate polygons.
inline bool inside( const std::vector< point >& poly, const point& p )
{
    if ( poly.empty() )
        return false;
    if ( poly.size() == 1 )
        return poly[ 0 ] == p;
    if ( poly.size() == 2 )
        return on_segment( poly[ 0 ], poly[ 1 ], p );
    for ( std::size_t i = 0; i < poly.size(); ++i )
        if ( sgn( cross( poly[ i ], poly[ ( i + 1 ) % poly.size() ], p ) ) < 0 )
            return false;
    return true;
}

inline std::vector< std::pair< point, point > > edges( const std::vector< point >& poly )
{
    std::vector< std::pair< point, point > > result;
    if ( poly.size() == 1 )
        result.push_back( { poly[ 0 ], poly[ 0 ] } );
    else if ( poly.size() == 2 )
        result.push_back( { poly[ 0 ], poly[ 1 ] } );
    else
        for ( std::size_t i = 0; i < poly.size(); ++i )
            result.push_back( { poly[ i ], poly[ ( i + 1 ) % poly.size() ] } );
    return result;
}

// Intersection points of two closed segments (0, 1 or the 2 overlap endpoints).
inline std::vector< point > segment_intersections( const point& a, const point& b, const point& c, const point& d )
{
    std::vector< point > out;
    const rational d1 = cross( a, b, c );
    const rational d2 = cross( a, b, d );
    const rational d3 = cross( c, d, a );
    const rational d4 = cross( c, d, b );
    const rational denom = ( b.x - a.x ) * ( d.y - c.y ) - ( b.y - a.y ) * ( d.x - c.x );
    if ( sgn( denom ) != 0 )
    {
        if ( sgn( d1 ) * sgn( d2 ) <= 0 && sgn( d3 ) * sgn( d4 ) <= 0 )
        {
            const rational t = ( ( c.x - a.x ) * ( d.y - c.y ) - ( c.y - a.y ) * ( d.x - c.x ) ) / denom;
            out.push_back( { rational( a.x + t * ( b.x - a.x ) ), rational( a.y + t * ( b.y - a.y ) ) } );
        }
        return out;
    }
    for ( const auto& p : { a, b } )
        if ( on_segment( c, d, p ) )
            out.push_back( p );
    for ( const auto& p : { c, d } )
        if ( on_segment( a, b, p ) )
            out.push_back( p );
    return out;
}

// Slow intersection: hull of mutually contained vertices and all edge crossings.
inline polygon oracle_intersection( const polygon& p, const polygon& q )
{
    std::vector< point > candidates;
    for ( const auto& v : p.vertices() )
        if ( inside( q.vertices(), v ) )
            candidates.push_back( v );
    for ( const auto& v : q.vertices() )
        if ( inside( p.vertices(), v ) )
            candidates.push_back( v );
    for ( const auto& [ a, b ] : edges( p.vertices() ) )
        for ( const auto& [ c, d ] : edges( q.vertices() ) )
            for ( const auto& x : segment_intersections( a, b, c, d ) )
                candidates.push_back( x );
    return polygon::hull( std::move( candidates ) );
}

inline rational random_coordinate( std::mt19937& rng )
{
    const long num = static_cast< long >( uniform( rng, 0, 40 ) ) - 20;
    const long den = static_cast< long >( uniform( rng, 1, 4 ) );
    return make_rational( num, den );
}

// Hull of a few random small-rational points; sometimes degenerate.
inline polygon random_polygon( std::mt19937& rng )
{
    std::vector< point > points;
    const std::size_t n = uniform( rng, 1, 7 );
    for ( std::size_t i = 0; i < n; ++i )
        points.push_back( { random_coordinate( rng ), random_coordinate( rng ) } );
    return polygon::hull( std::move( points ) );
}

} // namespace svest::test
