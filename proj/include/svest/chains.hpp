#pragma once

#include "aggregation.hpp"
#include "machine.hpp"

#include <optional>
#include <string>
#include <vector>

namespace svest
{

enum class chain_condition
{
    single_emission,   // (i): a state emits two distinct block symbols
    single_predecessor // (ii): a state is entered from two distinct sources
};

struct chain_violation
{
    chain_condition condition;
    transition first;
    transition second;
};

struct chain_check
{
    std::optional< chain_violation > violation;

    [[nodiscard]] bool is_chain() const { return !violation; }
    explicit operator bool() const { return is_chain(); }
};

// Checks the subrelation of Delta labeled by `block` against conditions (i) and (ii).
[[nodiscard]] inline chain_check is_nondeterministic_chain( const finite_state_machine& m,
                                                            const std::vector< symbol_id >& block )
{
    std::vector< bool > in_block( m.symbol_count(), false );
    for ( auto w : block )
    {
        if ( index( w ) >= m.symbol_count() )
            throw unknown_symbol_error( "#" + std::to_string( index( w ) ) );
        in_block[ index( w ) ] = true;
    }

    std::vector< std::optional< transition > > emitted( m.state_count() );
    std::vector< std::optional< transition > > entered( m.state_count() );
    for ( const auto& t : m.transitions() )
    {
        if ( !in_block[ index( t.symbol ) ] )
            continue;
        auto& out = emitted[ index( t.source ) ];
        if ( out && out->symbol != t.symbol )
            return { chain_violation{ chain_condition::single_emission, *out, t } };
        if ( !out )
            out = t;
    }
    for ( const auto& t : m.transitions() )
    {
        if ( !in_block[ index( t.symbol ) ] )
            continue;
        auto& in = entered[ index( t.target ) ];
        if ( in && in->source != t.source )
            return { chain_violation{ chain_condition::single_predecessor, *in, t } };
        if ( !in )
            in = t;
    }
    return {};
}

[[nodiscard]] inline chain_check is_nondeterministic_chain( const finite_state_machine& m,
                                                            const std::vector< std::string >& block )
{
    std::vector< symbol_id > ids;
    for ( const auto& name : block )
        ids.push_back( m.symbol( name ) );
    return is_nondeterministic_chain( m, ids );
}

struct chain_block
{
    std::vector< symbol_id > symbols;     // Omega_j, alphabet order
    std::vector< transition > transitions; // delta_j
};

struct chain_partition
{
    std::vector< std::string > alphabet;
    std::vector< chain_block > blocks;
};

// Symbols conflict when one state emits both, or when they enter a common state from
// distinct sources. Any proper colouring of this graph partitions W into chains; blocks are
// the colour classes of a first-fit greedy colouring in alphabet order (r is not minimised).
[[nodiscard]] inline chain_partition make_chain_partition( const finite_state_machine& m )
{
    const std::size_t n = m.symbol_count();
    std::vector< std::vector< bool > > conflict( n, std::vector< bool >( n, false ) );

    std::vector< std::vector< symbol_id > > emits( m.state_count() );
    std::vector< std::vector< transition > > enters( m.state_count() );
    for ( const auto& t : m.transitions() )
    {
        emits[ index( t.source ) ].push_back( t.symbol );
        enters[ index( t.target ) ].push_back( t );
    }

    std::optional< symbol_id > self_violation;
    for ( const auto& incoming : enters )
        for ( std::size_t a = 0; a < incoming.size(); ++a )
            for ( std::size_t b = a + 1; b < incoming.size(); ++b )
            {
                const auto& x = incoming[ a ];
                const auto& y = incoming[ b ];
                if ( x.source == y.source )
                    continue;
                if ( x.symbol == y.symbol )
                {
                    if ( !self_violation || x.symbol < *self_violation )
                        self_violation = x.symbol;
                    continue;
                }
                conflict[ index( x.symbol ) ][ index( y.symbol ) ] = true;
                conflict[ index( y.symbol ) ][ index( x.symbol ) ] = true;
            }
    if ( self_violation )
        throw not_chain_decomposable_error( m.name( *self_violation ) );

    for ( const auto& out : emits )
        for ( auto x : out )
            for ( auto y : out )
                if ( x != y )
                    conflict[ index( x ) ][ index( y ) ] = true;

    std::vector< std::size_t > colour( n );
    std::size_t colours = 0;
    for ( std::size_t w = 0; w < n; ++w )
    {
        std::vector< bool > used( colours, false );
        for ( std::size_t v = 0; v < w; ++v )
            if ( conflict[ w ][ v ] )
                used[ colour[ v ] ] = true;
        std::size_t c = 0;
        while ( c < colours && used[ c ] )
            ++c;
        colour[ w ] = c;
        colours = std::max( colours, c + 1 );
    }

    chain_partition result{ m.alphabet(), std::vector< chain_block >( colours ) };
    for ( std::uint32_t w = 0; w < n; ++w )
        result.blocks[ colour[ w ] ].symbols.push_back( symbol_id{ w } );
    for ( const auto& t : m.transitions() )
        result.blocks[ colour[ index( t.symbol ) ] ].transitions.push_back( t );
    return result;
}

// Smallest b with b^p >= n.
[[nodiscard]] inline std::size_t digit_radix( std::size_t n, std::size_t p )
{
    std::size_t b = 1;
    auto fits = [ & ]( std::size_t base ) {
        std::size_t power = 1;
        for ( std::size_t i = 0; i < p; ++i )
        {
            power *= base;
            if ( power >= n )
                return true;
        }
        return power >= n;
    };
    while ( !fits( b ) )
        ++b;
    return b;
}

// Each chain's symbols are numbered in block order and written in p mixed-radix digits,
// most significant first; A_k emits digit k tagged with the chain, "c<j>.d<k>.<digit>".
// The chain tag keeps V_{j,k} disjoint across chains, which makes the suite consistent.
[[nodiscard]] inline aggregation_suite synthesize_suite( const chain_partition& partition, std::size_t p )
{
    if ( p == 0 )
        throw error( "number of aggregation functions must be positive" );

    std::vector< aggregation_function > functions;
    for ( std::size_t k = 1; k <= p; ++k )
    {
        std::vector< std::string > codomain;
        std::vector< symbol_id > map( partition.alphabet.size() );
        for ( std::size_t j = 0; j < partition.blocks.size(); ++j )
        {
            const auto& block = partition.blocks[ j ].symbols;
            const std::size_t radix = digit_radix( block.size(), p );
            std::size_t weight = 1;
            for ( std::size_t i = k; i < p; ++i )
                weight *= radix;
            std::map< std::size_t, symbol_id > digit_symbol;
            for ( std::size_t i = 0; i < block.size(); ++i )
            {
                const std::size_t digit = ( i / weight ) % radix;
                auto [ it, inserted ] =
                        digit_symbol.emplace( digit, symbol_id{ static_cast< std::uint32_t >( codomain.size() ) } );
                if ( inserted )
                    codomain.push_back( "c" + std::to_string( j + 1 ) + ".d" + std::to_string( k ) + "."
                                        + std::to_string( digit ) );
                map[ index( block[ i ] ) ] = it->second;
            }
        }
        functions.emplace_back( partition.alphabet, std::move( codomain ), std::move( map ) );
    }
    return aggregation_suite( std::move( functions ) );
}

} // namespace svest
