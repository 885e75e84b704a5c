#pragma once

#include "aggregation.hpp"
#include "lcomplete.hpp"
#include "decentralized.hpp"
#include "polygon.hpp"
#include "state_set.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace svest::twotank
{

// x(t+1) = A x(t) + u(t), y(t) = x(t), with a1 = a2 = 7/20 and b = 1/4.
[[nodiscard]] inline matrix2 dynamics()
{
    const rational a1 = make_rational( 7, 20 );
    const rational a2 = make_rational( 7, 20 );
    const rational b = make_rational( 1, 4 );
    return { { { rational( 1 - a1 - b ), b }, { b, rational( 1 - a2 - b ) } } };
}

inline constexpr std::array< long, 3 > input_levels = { 1, 7, 14 };
inline constexpr std::array< long, 4 > output_bounds = { 0, 10, 20, 30 };
inline constexpr std::size_t levels = 3;
inline constexpr std::size_t alphabet_size = levels * levels * levels * levels;

// Level indices are 0-based; names use the 1-based superscripts, e.g. "u22y11".
struct symbol
{
    std::size_t u1 = 0;
    std::size_t u2 = 0;
    std::size_t y1 = 0;
    std::size_t y2 = 0;

    friend bool operator==( const symbol&, const symbol& ) = default;
};

[[nodiscard]] inline symbol_id encode( const symbol& s )
{
    return symbol_id{ static_cast< std::uint32_t >( ( ( s.u1 * levels + s.u2 ) * levels + s.y1 ) * levels + s.y2 ) };
}

[[nodiscard]] inline symbol decode( symbol_id id )
{
    std::size_t i = index( id );
    symbol s;
    s.y2 = i % levels;
    i /= levels;
    s.y1 = i % levels;
    i /= levels;
    s.u2 = i % levels;
    s.u1 = i / levels;
    return s;
}

// Which output channels an estimator observes: both (monolithic W), or only y1 / y2,
// i.e. V_1 = U1 x U2 x A_1(Y1 x Y2) and V_2 = U1 x U2 x A_2(Y1 x Y2).
enum class observation
{
    both,
    first,
    second
};

[[nodiscard]] inline std::size_t symbol_count( observation o )
{
    return o == observation::both ? alphabet_size : levels * levels * levels;
}

[[nodiscard]] inline std::string symbol_name( observation o, symbol_id id )
{
    const auto digit = []( std::size_t i ) { return std::to_string( i + 1 ); };
    if ( o == observation::both )
    {
        const auto s = decode( id );
        return "u" + digit( s.u1 ) + digit( s.u2 ) + "y" + digit( s.y1 ) + digit( s.y2 );
    }
    std::size_t i = index( id );
    const std::size_t y = i % levels;
    i /= levels;
    const std::size_t u2 = i % levels;
    const std::size_t u1 = i / levels;
    return "u" + digit( u1 ) + digit( u2 ) + ( o == observation::first ? "y" + digit( y ) + "_" : "y_" + digit( y ) );
}

[[nodiscard]] inline std::vector< std::string > alphabet( observation o )
{
    std::vector< std::string > names;
    for ( std::uint32_t i = 0; i < symbol_count( o ); ++i )
        names.push_back( symbol_name( o, symbol_id{ i } ) );
    return names;
}

[[nodiscard]] inline polygon domain()
{
    return polygon::box( output_bounds.front(), output_bounds.back(), output_bounds.front(), output_bounds.back() );
}

// Quantization cells are closed on both ends for set computations.
[[nodiscard]] inline polygon output_cell( std::size_t y1, std::size_t y2 )
{
    return polygon::box( output_bounds.at( y1 ), output_bounds.at( y1 + 1 ), output_bounds.at( y2 ),
                         output_bounds.at( y2 + 1 ) );
}

[[nodiscard]] inline std::optional< std::size_t > quantize( const rational& y )
{
    if ( y < output_bounds.front() || y > output_bounds.back() )
        return std::nullopt;
    for ( std::size_t i = 0; i + 1 < output_bounds.size(); ++i )
        if ( y < output_bounds[ i + 1 ] )
            return i;
    return levels - 1;
}

[[nodiscard]] inline vector2 input( std::size_t u1, std::size_t u2 )
{
    return { rational( input_levels.at( u1 ) ), rational( input_levels.at( u2 ) ) };
}

// The quantized two-tank I/S/O machine over polygon-valued state sets.
class system
{
    observation _observation;
    matrix2 _a = dynamics();
    polygon _domain = domain();
    std::vector< polygon > _chi;
    std::vector< vector2 > _input;

public:
    using set_type = polygon;

    explicit system( observation o = observation::both ) : _observation{ o }
    {
        const auto n = twotank::symbol_count( o );
        for ( std::uint32_t i = 0; i < n; ++i )
        {
            std::size_t u1 = 0;
            std::size_t u2 = 0;
            if ( o == observation::both )
            {
                const auto s = decode( symbol_id{ i } );
                u1 = s.u1;
                u2 = s.u2;
                _chi.push_back( output_cell( s.y1, s.y2 ) );
            }
            else
            {
                const std::size_t y = i % levels;
                u2 = ( i / levels ) % levels;
                u1 = i / ( levels * levels );
                const rational lo( output_bounds[ y ] );
                const rational hi( output_bounds[ y + 1 ] );
                const rational full_lo( output_bounds.front() );
                const rational full_hi( output_bounds.back() );
                _chi.push_back( o == observation::first ? polygon::box( lo, hi, full_lo, full_hi )
                                                        : polygon::box( full_lo, full_hi, lo, hi ) );
            }
            _input.push_back( input( u1, u2 ) );
        }
    }

    [[nodiscard]] observation observed() const { return _observation; }
    [[nodiscard]] std::size_t symbol_count() const { return _chi.size(); }
    [[nodiscard]] const matrix2& matrix() const { return _a; }
    [[nodiscard]] std::string name( symbol_id w ) const { return symbol_name( _observation, w ); }
    [[nodiscard]] polygon full_set() const { return _domain; }

    [[nodiscard]] const polygon& chi_symbol( symbol_id w ) const { return _chi.at( index( w ) ); }

    // Successors of the states in `from` that emit w, restricted to the output domain.
    [[nodiscard]] polygon rho_hat( symbol_id w, const polygon& from ) const
    {
        const auto compatible = intersect( from, chi_symbol( w ) );
        if ( compatible.empty() )
            return {};
        return intersect( affine_image( compatible, _a, _input.at( index( w ) ) ), _domain );
    }
};

// compatible = region & cell(nu), predicted = (A compatible + u) & [0,30]^2.
[[nodiscard]] inline estimate_pair< polygon > symbolic_step( const system& sys, const polygon& region, symbol_id w )
{
    return estimate_step( sys, region, w );
}

// A_1 : (mu1, mu2, nu1^i, nu2) -> (mu1, mu2, theta_1^i), A_2 likewise on the second channel.
[[nodiscard]] inline aggregation_function output_aggregation( observation o )
{
    if ( o == observation::both )
        return aggregation_function::identity( alphabet( observation::both ) );
    std::vector< symbol_id > map;
    for ( std::uint32_t i = 0; i < alphabet_size; ++i )
    {
        const auto s = decode( symbol_id{ i } );
        const std::size_t y = o == observation::first ? s.y1 : s.y2;
        map.push_back( symbol_id{ static_cast< std::uint32_t >( ( s.u1 * levels + s.u2 ) * levels + y ) } );
    }
    return { alphabet( observation::both ), alphabet( o ), std::move( map ) };
}

[[nodiscard]] inline aggregation_suite output_suite()
{
    return aggregation_suite( { output_aggregation( observation::first ), output_aggregation( observation::second ) } );
}

class decentralized : public decentralized_estimator< system >
{
public:
    explicit decentralized( const system& monolithic )
            : decentralized_estimator( monolithic, { system( observation::first ), system( observation::second ) },
                                       { output_aggregation( observation::first ),
                                         output_aggregation( observation::second ) } ) {}
};

struct trajectory_point
{
    point state;
    symbol_id observed; // (u(t), quantized y(t))
};

// Exact simulation from x0; throws once the state leaves the quantized range.
[[nodiscard]] inline std::vector< trajectory_point >
simulate( const point& x0, const std::vector< std::array< std::size_t, 2 > >& inputs )
{
    const auto a = dynamics();
    std::vector< trajectory_point > result;
    point x = x0;
    for ( const auto& [ u1, u2 ] : inputs )
    {
        const auto q1 = quantize( x.x );
        const auto q2 = quantize( x.y );
        if ( !q1 || !q2 )
            throw error( "two-tank state left the measured range [0,30]^2" );
        result.push_back( { x, encode( { u1, u2, *q1, *q2 } ) } );
        x = apply( a, input( u1, u2 ), x );
    }
    return result;
}

// Reference input sequence (level indices) for the 8-step run from x(0) = 0. The first three
// steps apply (7, 7), so t = 0, 1, 2 observe u22y11, u22y11, u22y22. The whole run stays
// inside [0,30]^2.
[[nodiscard]] inline std::vector< std::array< std::size_t, 2 > > reference_inputs()
{
    return { { 1, 1 }, { 1, 1 }, { 1, 1 }, { 2, 0 }, { 2, 0 }, { 0, 2 }, { 0, 1 }, { 1, 1 } };
}

// Batch window estimates along a simulated run: at time t every estimator sees the last
// min(t + 1, ell) symbols of its own alphabet.
struct window_step
{
    std::size_t time = 0;
    point state;
    symbol_id observed{};
    polygon monolithic;
    std::array< polygon, 2 > distributed;
    polygon fused;
    bool contained = false; // true state inside the monolithic and the fused estimate
    bool exact = false;     // fused == monolithic
};

[[nodiscard]] inline std::vector< window_step > window_trace( const std::vector< trajectory_point >& run,
                                                              std::size_t ell )
{
    if ( ell == 0 )
        throw error( "ell must be positive" );
    const system mono( observation::both );
    const std::array< system, 2 > parts = { system( observation::first ), system( observation::second ) };
    const auto suite = output_suite();

    std::vector< window_step > trace;
    for ( std::size_t t = 0; t < run.size(); ++t )
    {
        const std::size_t first = t + 1 > ell ? t + 1 - ell : 0;
        std::vector< symbol_id > window;
        for ( std::size_t i = first; i <= t; ++i )
            window.push_back( run[ i ].observed );

        window_step step;
        step.time = t;
        step.state = run[ t ].state;
        step.observed = run[ t ].observed;
        step.monolithic = estimate( mono, window ).compatible;
        step.fused = domain();
        for ( std::size_t k = 0; k < 2; ++k )
        {
            std::vector< symbol_id > aggregated;
            for ( auto w : window )
                aggregated.push_back( suite[ k ]( w ) );
            step.distributed[ k ] = estimate( parts[ k ], aggregated ).compatible;
            step.fused = intersect( step.fused, step.distributed[ k ] );
        }
        step.contained = step.monolithic.contains( step.state ) && step.fused.contains( step.state );
        step.exact = step.fused == step.monolithic;
        trace.push_back( std::move( step ) );
    }
    return trace;
}

// Shapes of the monolithic and both distributed l-complete automata, in that order.
[[nodiscard]] inline std::array< lcomplete_shape, 3 > complexity_shapes( std::size_t ell,
                                                                         const lcomplete_options& options = {} )
{
    return { build_lcomplete( system( observation::both ), ell, options ).shape(),
             build_lcomplete( system( observation::first ), ell, options ).shape(),
             build_lcomplete( system( observation::second ), ell, options ).shape() };
}

} // namespace svest::twotank
