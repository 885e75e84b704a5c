#pragma once

#include "machine.hpp"

#include <algorithm>
#include <iterator>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace svest
{

// A_k : W -> V_k, a symbolwise coarsening of the external signal space.
class aggregation_function
{
    std::vector< std::string > _domain;
    std::vector< std::string > _codomain;
    std::vector< symbol_id > _map;
    std::vector< std::vector< symbol_id > > _preimage;
    std::map< std::string, symbol_id > _codomain_index;

public:
    aggregation_function( std::vector< std::string > domain, std::vector< std::string > codomain,
                          std::vector< symbol_id > map )
            : _domain{ std::move( domain ) }, _codomain{ std::move( codomain ) }, _map{ std::move( map ) }
    {
        if ( _map.size() != _domain.size() )
            throw alphabet_mismatch_error( "aggregation is not total on its domain" );
        if ( _codomain.size() > _domain.size() )
            throw error( "aggregate alphabet larger than the signal space" );
        for ( std::size_t i = 0; i < _codomain.size(); ++i )
            if ( !_codomain_index.emplace( _codomain[ i ], symbol_id{ static_cast< std::uint32_t >( i ) } ).second )
                throw error( "duplicate aggregate symbol " + _codomain[ i ] );
        _preimage.resize( _codomain.size() );
        for ( std::size_t w = 0; w < _map.size(); ++w )
        {
            if ( index( _map[ w ] ) >= _codomain.size() )
                throw error( "aggregate symbol index out of range" );
            _preimage[ index( _map[ w ] ) ].push_back( symbol_id{ static_cast< std::uint32_t >( w ) } );
        }
    }

    // Codomain ordered by first appearance along the domain order.
    static aggregation_function from_names( const std::vector< std::string >& domain,
                                            const std::map< std::string, std::string >& mapping )
    {
        std::vector< std::string > codomain;
        std::map< std::string, symbol_id > seen;
        std::vector< symbol_id > map;
        for ( const auto& w : domain )
        {
            const auto it = mapping.find( w );
            if ( it == mapping.end() )
                throw alphabet_mismatch_error( "aggregation has no image for symbol " + w );
            auto [ pos, inserted ] =
                    seen.emplace( it->second, symbol_id{ static_cast< std::uint32_t >( codomain.size() ) } );
            if ( inserted )
                codomain.push_back( it->second );
            map.push_back( pos->second );
        }
        for ( const auto& [ w, v ] : mapping )
            if ( std::find( domain.begin(), domain.end(), w ) == domain.end() )
                throw unknown_symbol_error( w );
        return { domain, std::move( codomain ), std::move( map ) };
    }

    static aggregation_function identity( const std::vector< std::string >& domain )
    {
        std::vector< symbol_id > map;
        for ( std::size_t i = 0; i < domain.size(); ++i )
            map.push_back( symbol_id{ static_cast< std::uint32_t >( i ) } );
        return { domain, domain, std::move( map ) };
    }

    [[nodiscard]] const std::vector< std::string >& domain() const { return _domain; }
    [[nodiscard]] const std::vector< std::string >& codomain() const { return _codomain; }
    [[nodiscard]] std::size_t codomain_size() const { return _codomain.size(); }

    [[nodiscard]] symbol_id operator()( symbol_id w ) const
    {
        if ( index( w ) >= _map.size() )
            throw unknown_symbol_error( "#" + std::to_string( index( w ) ) );
        return _map[ index( w ) ];
    }

    [[nodiscard]] const std::vector< symbol_id >& preimage( symbol_id v ) const
    {
        if ( index( v ) >= _preimage.size() )
            throw unknown_symbol_error( "#" + std::to_string( index( v ) ) );
        return _preimage[ index( v ) ];
    }

    [[nodiscard]] symbol_id aggregate_symbol( const std::string& name ) const
    {
        const auto it = _codomain_index.find( name );
        if ( it == _codomain_index.end() )
            throw unknown_symbol_error( name );
        return it->second;
    }

    [[nodiscard]] std::map< std::string, std::string > mapping() const
    {
        std::map< std::string, std::string > result;
        for ( std::size_t w = 0; w < _domain.size(); ++w )
            result.emplace( _domain[ w ], _codomain[ index( _map[ w ] ) ] );
        return result;
    }
};

class aggregation_suite
{
    std::vector< aggregation_function > _functions;

public:
    explicit aggregation_suite( std::vector< aggregation_function > functions ) : _functions{ std::move( functions ) }
    {
        if ( _functions.empty() )
            throw error( "aggregation suite needs at least one function" );
        for ( const auto& f : _functions )
            if ( f.domain() != _functions.front().domain() )
                throw alphabet_mismatch_error( "aggregation functions disagree on the signal space" );
    }

    [[nodiscard]] std::size_t size() const { return _functions.size(); }
    [[nodiscard]] const aggregation_function& operator[]( std::size_t k ) const { return _functions.at( k ); }
    [[nodiscard]] auto begin() const { return _functions.begin(); }
    [[nodiscard]] auto end() const { return _functions.end(); }
    [[nodiscard]] const std::vector< std::string >& domain() const { return _functions.front().domain(); }
};

struct consistency_result
{
    bool consistent = true;
    std::optional< std::pair< symbol_id, symbol_id > > witness; // two symbols with identical tuples

    explicit operator bool() const { return consistent; }
};

// Resolvability: every symbol is identified by its tuple (A_1(w), ..., A_p(w)).
[[nodiscard]] inline consistency_result check_consistency( const aggregation_suite& suite )
{
    std::map< std::vector< symbol_id >, symbol_id > seen;
    for ( std::uint32_t w = 0; w < suite.domain().size(); ++w )
    {
        std::vector< symbol_id > tuple;
        for ( const auto& f : suite )
            tuple.push_back( f( symbol_id{ w } ) );
        auto [ it, inserted ] = seen.emplace( std::move( tuple ), symbol_id{ w } );
        if ( !inserted )
            return { false, std::pair{ it->second, symbol_id{ w } } };
    }
    return {};
}

[[nodiscard]] inline signal_string aggregate_string( const aggregation_function& f, const signal_string& w )
{
    signal_string v{ {}, w.start_time };
    v.symbols.reserve( w.size() );
    for ( auto s : w.symbols )
        v.symbols.push_back( f( s ) );
    return v;
}

// The preimage A_k^{-1}(v), the product of per-position preimages, enumerated lazily.
class preimage_strings
{
    const aggregation_function* _f;
    signal_string _v;

public:
    preimage_strings( const aggregation_function& f, signal_string v ) : _f{ &f }, _v{ std::move( v ) }
    {
        for ( auto s : _v.symbols )
            (void)_f->preimage( s );
    }

    [[nodiscard]] std::size_t size() const
    {
        std::size_t n = 1;
        for ( auto s : _v.symbols )
            n *= _f->preimage( s ).size();
        return n;
    }

    class iterator
    {
        const preimage_strings* _owner = nullptr;
        std::vector< std::size_t > _digits;
        bool _done = true;

    public:
        using iterator_category = std::input_iterator_tag;
        using value_type = signal_string;
        using difference_type = std::ptrdiff_t;
        using pointer = void;
        using reference = signal_string;

        iterator() = default;
        explicit iterator( const preimage_strings& owner )
                : _owner{ &owner }, _digits( owner._v.size(), 0 ), _done{ owner.size() == 0 } {}

        signal_string operator*() const
        {
            signal_string w{ {}, _owner->_v.start_time };
            for ( std::size_t l = 0; l < _digits.size(); ++l )
                w.symbols.push_back( _owner->_f->preimage( _owner->_v.symbols[ l ] )[ _digits[ l ] ] );
            return w;
        }

        iterator& operator++()
        {
            // Odometer with the last position varying fastest (lexicographic order).
            for ( std::size_t l = _digits.size(); l-- > 0; )
            {
                if ( ++_digits[ l ] < _owner->_f->preimage( _owner->_v.symbols[ l ] ).size() )
                    return *this;
                _digits[ l ] = 0;
            }
            _done = true;
            return *this;
        }

        iterator operator++( int )
        {
            auto copy = *this;
            ++*this;
            return copy;
        }

        bool operator==( const iterator& other ) const
        {
            if ( _done || other._done )
                return _done == other._done;
            return _digits == other._digits;
        }
    };

    [[nodiscard]] iterator begin() const { return iterator( *this ); }
    [[nodiscard]] iterator end() const { return {}; }

    [[nodiscard]] std::vector< signal_string > to_vector() const { return { begin(), end() }; }
};

[[nodiscard]] inline preimage_strings invert_string( const aggregation_function& f, const signal_string& v )
{
    return { f, v };
}

struct distributed_machine
{
    finite_state_machine machine;  // P_k over V_k
    aggregation_function aggregation;
    std::size_t k = 0;             // 1-based position in the suite
    std::string parent;
};

// Delta_k = { (x, A_k(w), x') : (x, w, x') in Delta }, deduplicated; X and X0 unchanged.
[[nodiscard]] inline distributed_machine build_distributed( const finite_state_machine& m,
                                                            const aggregation_function& f, std::size_t k = 1,
                                                            std::string parent = {} )
{
    if ( f.domain() != m.alphabet() )
        throw alphabet_mismatch_error( "aggregation domain differs from the machine alphabet" );
    std::vector< transition > relabeled;
    relabeled.reserve( m.transitions().size() );
    for ( const auto& t : m.transitions() )
        relabeled.push_back( { t.source, f( t.symbol ), t.target } );
    return { finite_state_machine( m.state_names(), f.codomain(), std::move( relabeled ), m.initial() ), f, k,
             std::move( parent ) };
}

} // namespace svest
