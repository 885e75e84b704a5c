#pragma once

#include "error.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <string>
#include <vector>

namespace svest
{

using rational = mpq_class;

[[nodiscard]] inline rational make_rational( long numerator, long denominator = 1 )
{
    rational q( numerator, denominator );
    q.canonicalize();
    return q;
}

struct point
{
    rational x;
    rational y;

    friend bool operator==( const point& a, const point& b ) { return a.x == b.x && a.y == b.y; }
    friend bool operator<( const point& a, const point& b ) { return a.x < b.x || ( a.x == b.x && a.y < b.y ); }
};

// cross((b - a), (c - a)); positive for a left turn.
[[nodiscard]] inline rational orientation( const point& a, const point& b, const point& c )
{
    rational r = ( b.x - a.x ) * ( c.y - a.y ) - ( b.y - a.y ) * ( c.x - a.x );
    return r;
}

using matrix2 = std::array< std::array< rational, 2 >, 2 >;
using vector2 = std::array< rational, 2 >;

// Closed half-plane { p : a . p <= b }.
struct half_plane
{
    rational a0;
    rational a1;
    rational b;

    [[nodiscard]] rational value( const point& p ) const
    {
        rational v = a0 * p.x + a1 * p.y;
        return v;
    }
    [[nodiscard]] bool contains( const point& p ) const { return value( p ) <= b; }
};

// Convex polygon with exact rational vertices. Canonical form: counter-clockwise, starting at
// the lexicographically smallest vertex, no repeated or collinear vertices. Degenerate sets
// are kept as 2 vertices (segment) or 1 vertex (point); the empty set has none.
class polygon
{
    std::vector< point > _vertices;

public:
    polygon() = default;

    // Convex hull of arbitrary points.
    static polygon hull( std::vector< point > points )
    {
        std::sort( points.begin(), points.end() );
        points.erase( std::unique( points.begin(), points.end() ), points.end() );
        polygon result;
        if ( points.size() <= 2 )
        {
            result._vertices = std::move( points );
            return result;
        }
        std::vector< point > chain( 2 * points.size() );
        std::size_t k = 0;
        for ( const auto& p : points )
        {
            while ( k >= 2 && sgn( orientation( chain[ k - 2 ], chain[ k - 1 ], p ) ) <= 0 )
                --k;
            chain[ k++ ] = p;
        }
        for ( std::size_t i = points.size() - 1, lower = k + 1; i-- > 0; )
        {
            while ( k >= lower && sgn( orientation( chain[ k - 2 ], chain[ k - 1 ], points[ i ] ) ) <= 0 )
                --k;
            chain[ k++ ] = points[ i ];
        }
        chain.resize( k - 1 );
        result._vertices = std::move( chain );
        return result;
    }

    static polygon box( const rational& x0, const rational& x1, const rational& y0, const rational& y1 )
    {
        return hull( { { x0, y0 }, { x1, y0 }, { x1, y1 }, { x0, y1 } } );
    }

    [[nodiscard]] bool empty() const { return _vertices.empty(); }
    [[nodiscard]] std::size_t size() const { return _vertices.size(); }
    [[nodiscard]] bool is_degenerate() const { return !_vertices.empty() && _vertices.size() < 3; }
    [[nodiscard]] const std::vector< point >& vertices() const { return _vertices; }

    [[nodiscard]] bool contains( const point& p ) const
    {
        for ( const auto& h : half_planes() )
            if ( !h.contains( p ) )
                return false;
        return !empty();
    }

    // Half-plane description; degenerate sets are pinned by opposing pairs.
    [[nodiscard]] std::vector< half_plane > half_planes() const
    {
        std::vector< half_plane > planes;
        const auto n = _vertices.size();
        if ( n == 1 )
        {
            const auto& c = _vertices[ 0 ];
            planes.push_back( { 1, 0, c.x } );
            planes.push_back( { -1, 0, -c.x } );
            planes.push_back( { 0, 1, c.y } );
            planes.push_back( { 0, -1, -c.y } );
        }
        else if ( n == 2 )
        {
            const auto& c = _vertices[ 0 ];
            const auto& d = _vertices[ 1 ];
            const rational ex = d.x - c.x;
            const rational ey = d.y - c.y;
            const rational line = -ey * c.x + ex * c.y;
            planes.push_back( { -ey, ex, line } );
            planes.push_back( { ey, -ex, -line } );
            planes.push_back( { ex, ey, rational( ex * d.x + ey * d.y ) } );
            planes.push_back( { -ex, -ey, rational( -( ex * c.x + ey * c.y ) ) } );
        }
        else
        {
            for ( std::size_t i = 0; i < n; ++i )
            {
                const auto& v = _vertices[ i ];
                const auto& u = _vertices[ ( i + 1 ) % n ];
                const rational ex = u.x - v.x;
                const rational ey = u.y - v.y;
                planes.push_back( { ey, -ex, rational( ey * v.x - ex * v.y ) } );
            }
        }
        return planes;
    }

    // Sutherland-Hodgman against one closed half-plane; convexity is preserved.
    [[nodiscard]] polygon clip( const half_plane& h ) const
    {
        const auto n = _vertices.size();
        std::vector< point > out;
        for ( std::size_t i = 0; i < n; ++i )
        {
            const auto& cur = _vertices[ i ];
            const auto& nxt = _vertices[ ( i + 1 ) % n ];
            const rational vc = h.value( cur ) - h.b;
            const rational vn = h.value( nxt ) - h.b;
            const bool cur_in = sgn( vc ) <= 0;
            const bool nxt_in = sgn( vn ) <= 0;
            if ( cur_in )
                out.push_back( cur );
            if ( cur_in != nxt_in && sgn( vc ) != 0 && sgn( vn ) != 0 )
            {
                const rational t = vc / ( vc - vn );
                out.push_back( { rational( cur.x + t * ( nxt.x - cur.x ) ), rational( cur.y + t * ( nxt.y - cur.y ) ) } );
            }
        }
        return hull( std::move( out ) );
    }

    friend polygon intersect( const polygon& p, const polygon& q )
    {
        if ( p.empty() || q.empty() )
            return {};
        polygon result = p;
        for ( const auto& h : q.half_planes() )
        {
            result = result.clip( h );
            if ( result.empty() )
                break;
        }
        return result;
    }

    // Vertex count; the n_chi contribution of a polygon annotation.
    friend std::size_t annotation_size( const polygon& p ) { return p.size(); }

    friend bool operator==( const polygon& a, const polygon& b ) { return a._vertices == b._vertices; }
    friend bool operator<( const polygon& a, const polygon& b )
    {
        return std::lexicographical_compare( a._vertices.begin(), a._vertices.end(), b._vertices.begin(),
                                             b._vertices.end() );
    }
};

[[nodiscard]] inline point apply( const matrix2& m, const vector2& b, const point& p )
{
    return { rational( m[ 0 ][ 0 ] * p.x + m[ 0 ][ 1 ] * p.y + b[ 0 ] ),
             rational( m[ 1 ][ 0 ] * p.x + m[ 1 ][ 1 ] * p.y + b[ 1 ] ) };
}

[[nodiscard]] inline rational determinant( const matrix2& m )
{
    rational d = m[ 0 ][ 0 ] * m[ 1 ][ 1 ] - m[ 0 ][ 1 ] * m[ 1 ][ 0 ];
    return d;
}

// { A x + b : x in poly } for invertible A.
[[nodiscard]] inline polygon affine_image( const polygon& poly, const matrix2& a, const vector2& b )
{
    if ( sgn( determinant( a ) ) == 0 )
        throw singular_matrix_error();
    std::vector< point > image;
    image.reserve( poly.size() );
    for ( const auto& v : poly.vertices() )
        image.push_back( apply( a, b, v ) );
    return polygon::hull( std::move( image ) );
}

} // namespace svest
