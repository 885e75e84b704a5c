#pragma once

#include "estimator.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace svest
{

enum class count_convention
{
    all,      // every string of length <= ell, feasible or not
    feasible, // feasible strings only (the automaton's state space)
    reachable // transient states plus length-ell windows entered by a sliding transition
};

[[nodiscard]] inline std::string to_string( count_convention c )
{
    switch ( c )
    {
    case count_convention::all: return "all";
    case count_convention::feasible: return "feasible";
    case count_convention::reachable: return "reachable";
    }
    return "?";
}

[[nodiscard]] inline std::optional< count_convention > parse_count_convention( const std::string& text )
{
    if ( text == "all" )
        return count_convention::all;
    if ( text == "feasible" )
        return count_convention::feasible;
    if ( text == "reachable" )
        return count_convention::reachable;
    return std::nullopt;
}

struct lstate_transition
{
    std::uint32_t from;
    symbol_id symbol;
    std::uint32_t to;

    friend bool operator==( const lstate_transition&, const lstate_transition& ) = default;
    friend auto operator<=>( const lstate_transition&, const lstate_transition& ) = default;
};

struct length_counts
{
    std::size_t length = 0;
    std::size_t states = 0;
    std::size_t annotation_size = 0;
};

struct complexity_report
{
    count_convention convention = count_convention::feasible;
    std::size_t state_count = 0;      // |Z_ell|
    std::size_t annotation_size = 0;  // n_chi, counted per state
    std::size_t interned_size = 0;    // n_chi over distinct annotations only
    std::vector< length_counts > per_length;
};

// Shape of an l-complete automaton with annotation sizes only; enough to count.
struct lcomplete_shape
{
    std::size_t ell = 0;
    std::size_t alphabet_size = 0;
    std::vector< std::size_t > window_length;
    std::vector< std::size_t > annotation_size;
    std::vector< std::size_t > annotation_id;
    std::vector< lstate_transition > transitions;
};

[[nodiscard]] inline complexity_report make_complexity_report( const lcomplete_shape& shape,
                                                               count_convention convention )
{
    std::vector< bool > counted( shape.window_length.size(), true );
    if ( convention == count_convention::reachable )
    {
        std::vector< bool > entered( counted.size(), false );
        for ( const auto& t : shape.transitions )
            if ( shape.window_length[ t.from ] == shape.ell )
                entered[ t.to ] = true;
        for ( std::size_t s = 0; s < counted.size(); ++s )
            counted[ s ] = shape.window_length[ s ] < shape.ell || entered[ s ];
    }

    complexity_report report;
    report.convention = convention;
    report.per_length.resize( shape.ell );
    for ( std::size_t r = 0; r < shape.ell; ++r )
        report.per_length[ r ].length = r + 1;

    std::vector< bool > seen_annotation;
    for ( std::size_t s = 0; s < counted.size(); ++s )
    {
        if ( !counted[ s ] )
            continue;
        auto& bucket = report.per_length[ shape.window_length[ s ] - 1 ];
        ++bucket.states;
        bucket.annotation_size += shape.annotation_size[ s ];
        report.annotation_size += shape.annotation_size[ s ];
        const auto id = shape.annotation_id[ s ];
        if ( id >= seen_annotation.size() )
            seen_annotation.resize( id + 1, false );
        if ( !seen_annotation[ id ] )
        {
            seen_annotation[ id ] = true;
            report.interned_size += shape.annotation_size[ s ];
        }
    }
    if ( convention == count_convention::all )
    {
        // Infeasible strings are states with empty annotations.
        std::size_t power = 1;
        for ( auto& bucket : report.per_length )
        {
            power *= shape.alphabet_size;
            bucket.states = power;
        }
    }
    for ( const auto& bucket : report.per_length )
        report.state_count += bucket.states;
    return report;
}

struct lcomplete_options
{
    std::size_t budget = enumeration_budget(); // cap on |Z_ell|
    std::size_t jobs = 1;
};

// Strongest l-complete approximation P_ell of a transition system. States are the feasible
// strings of length <= ell; (z, w, z') extends z while |z| < ell and slides the window once
// |z| = ell, both only along feasible strings. Annotations chi(z) are interned.
template < transition_system S >
class lcomplete_automaton
{
public:
    using set_type = typename S::set_type;

private:
    std::size_t _ell = 0;
    std::size_t _alphabet_size = 0;
    std::vector< std::vector< symbol_id > > _windows;
    std::map< std::vector< symbol_id >, std::uint32_t > _window_index;
    std::vector< std::uint32_t > _annotation_of;
    std::vector< set_type > _annotations;
    std::vector< lstate_transition > _transitions;
    std::vector< std::size_t > _out_begin; // CSR offsets into _transitions, by source
    std::vector< std::uint32_t > _initial;  // Z0 indexed by symbol, or npos

public:
    static constexpr std::uint32_t npos = ~std::uint32_t{ 0 };

    lcomplete_automaton( const S& source, std::size_t ell, const lcomplete_options& options = {} )
            : _ell{ ell }, _alphabet_size{ source.symbol_count() }
    {
        if ( ell == 0 )
            throw error( "ell must be positive" );
        build( source, options );
    }

    [[nodiscard]] std::size_t ell() const { return _ell; }
    [[nodiscard]] std::size_t alphabet_size() const { return _alphabet_size; }
    [[nodiscard]] std::size_t state_count() const { return _windows.size(); }
    [[nodiscard]] const std::vector< symbol_id >& window( std::uint32_t s ) const { return _windows.at( s ); }
    [[nodiscard]] const set_type& annotation( std::uint32_t s ) const { return _annotations[ _annotation_of.at( s ) ]; }
    [[nodiscard]] std::uint32_t annotation_id( std::uint32_t s ) const { return _annotation_of.at( s ); }
    [[nodiscard]] std::size_t distinct_annotations() const { return _annotations.size(); }
    [[nodiscard]] const std::vector< lstate_transition >& transitions() const { return _transitions; }

    [[nodiscard]] std::uint32_t initial( symbol_id w ) const
    {
        return index( w ) < _initial.size() ? _initial[ index( w ) ] : npos;
    }

    [[nodiscard]] std::uint32_t find( const std::vector< symbol_id >& window ) const
    {
        const auto it = _window_index.find( window );
        return it == _window_index.end() ? npos : it->second;
    }

    [[nodiscard]] std::uint32_t next( std::uint32_t from, symbol_id w ) const
    {
        const auto first = _transitions.begin() + static_cast< std::ptrdiff_t >( _out_begin[ from ] );
        const auto last = _transitions.begin() + static_cast< std::ptrdiff_t >( _out_begin[ from + 1 ] );
        const auto it = std::lower_bound( first, last, w,
                                          []( const lstate_transition& t, symbol_id s ) { return t.symbol < s; } );
        return ( it != last && it->symbol == w ) ? it->to : npos;
    }

    [[nodiscard]] lcomplete_shape shape() const
    {
        lcomplete_shape result{ _ell, _alphabet_size, {}, {}, {}, _transitions };
        for ( std::uint32_t s = 0; s < state_count(); ++s )
        {
            result.window_length.push_back( _windows[ s ].size() );
            result.annotation_size.push_back( annotation_size( annotation( s ) ) );
            result.annotation_id.push_back( _annotation_of[ s ] );
        }
        return result;
    }

private:
    struct frontier_entry
    {
        std::uint32_t state;
        set_type predicted;
    };

    struct extension
    {
        std::uint32_t from;
        symbol_id symbol;
        set_type compatible;
        set_type predicted;
    };

    std::uint32_t add_state( std::vector< symbol_id > window, const set_type& chi,
                             std::map< set_type, std::uint32_t >& pool, std::size_t budget )
    {
        if ( _windows.size() >= budget )
            throw budget_exceeded_error( _windows.size() + 1, budget );
        auto [ it, inserted ] = pool.emplace( chi, static_cast< std::uint32_t >( _annotations.size() ) );
        if ( inserted )
            _annotations.push_back( chi );
        const auto id = static_cast< std::uint32_t >( _windows.size() );
        _window_index.emplace( window, id );
        _windows.push_back( std::move( window ) );
        _annotation_of.push_back( it->second );
        return id;
    }

    void build( const S& source, const lcomplete_options& options )
    {
        // Symbols sharing chi(w) share the feasibility test of every extension.
        std::vector< set_type > classes;
        std::vector< std::vector< symbol_id > > members;
        {
            std::map< set_type, std::size_t > class_index;
            for ( std::uint32_t w = 0; w < _alphabet_size; ++w )
            {
                set_type chi( source.chi_symbol( symbol_id{ w } ) );
                auto [ it, inserted ] = class_index.emplace( chi, classes.size() );
                if ( inserted )
                {
                    classes.push_back( std::move( chi ) );
                    members.emplace_back();
                }
                members[ it->second ].push_back( symbol_id{ w } );
            }
        }

        std::map< set_type, std::uint32_t > pool;
        std::vector< frontier_entry > frontier;
        _initial.assign( _alphabet_size, npos );
        for ( std::uint32_t w = 0; w < _alphabet_size; ++w )
        {
            auto pair = estimate( source, std::vector< symbol_id >{ symbol_id{ w } } );
            if ( pair.compatible.empty() )
                continue;
            const auto id = add_state( { symbol_id{ w } }, pair.compatible, pool, options.budget );
            _initial[ w ] = id;
            frontier.push_back( { id, std::move( pair.predicted ) } );
        }

        // For each frontier state: all feasible one-symbol extensions, in symbol order.
        auto expand = [ & ]( const frontier_entry& entry, bool with_prediction ) {
            std::vector< extension > result;
            for ( std::size_t c = 0; c < classes.size(); ++c )
            {
                auto chi = intersect( entry.predicted, classes[ c ] );
                if ( chi.empty() )
                    continue;
                for ( auto w : members[ c ] )
                    result.push_back( { entry.state, w, chi,
                                        with_prediction ? set_type( source.rho_hat( w, chi ) ) : set_type{} } );
            }
            std::sort( result.begin(), result.end(),
                       []( const extension& a, const extension& b ) { return a.symbol < b.symbol; } );
            return result;
        };

        auto expand_all = [ & ]( const std::vector< frontier_entry >& level, bool with_prediction ) {
            std::vector< std::vector< extension > > out( level.size() );
            const std::size_t jobs = std::max< std::size_t >( 1, std::min( options.jobs, level.size() ) );
            if ( jobs == 1 )
            {
                for ( std::size_t i = 0; i < level.size(); ++i )
                    out[ i ] = expand( level[ i ], with_prediction );
                return out;
            }
            std::vector< std::jthread > workers;
            for ( std::size_t j = 0; j < jobs; ++j )
                workers.emplace_back( [ &, j ] {
                    for ( std::size_t i = j; i < level.size(); i += jobs )
                        out[ i ] = expand( level[ i ], with_prediction );
                } );
            workers.clear();
            return out;
        };

        for ( std::size_t r = 1; r < _ell; ++r )
        {
            std::vector< frontier_entry > next_frontier;
            for ( auto& extensions : expand_all( frontier, true ) )
                for ( auto& e : extensions )
                {
                    auto window = _windows[ e.from ];
                    window.push_back( e.symbol );
                    const auto id = add_state( std::move( window ), e.compatible, pool, options.budget );
                    _transitions.push_back( { e.from, e.symbol, id } );
                    next_frontier.push_back( { id, std::move( e.predicted ) } );
                }
            frontier = std::move( next_frontier );
        }

        // Sliding transitions out of full windows; the shifted window is feasible whenever
        // the extended string is, so the target always exists.
        for ( auto& extensions : expand_all( frontier, false ) )
            for ( const auto& e : extensions )
            {
                std::vector< symbol_id > window( _windows[ e.from ].begin() + 1, _windows[ e.from ].end() );
                window.push_back( e.symbol );
                const auto to = find( window );
                if ( to == npos )
                    throw error( "internal: shifted window of a feasible string is infeasible" );
                _transitions.push_back( { e.from, e.symbol, to } );
            }

        std::sort( _transitions.begin(), _transitions.end() );
        _out_begin.assign( _windows.size() + 1, 0 );
        for ( const auto& t : _transitions )
            ++_out_begin[ t.from + 1 ];
        for ( std::size_t s = 0; s < _windows.size(); ++s )
            _out_begin[ s + 1 ] += _out_begin[ s ];
    }
};

template < transition_system S >
[[nodiscard]] lcomplete_automaton< S > build_lcomplete( const S& source, std::size_t ell,
                                                        const lcomplete_options& options = {} )
{
    return lcomplete_automaton< S >( source, ell, options );
}

template < transition_system S >
[[nodiscard]] complexity_report complexity( const lcomplete_automaton< S >& automaton,
                                            count_convention convention = count_convention::feasible )
{
    return make_complexity_report( automaton.shape(), convention );
}

// Follows the automaton along an observation stream. An observation without a matching
// transition moves to an empty-set sink for the rest of the stream.
template < transition_system S >
class lcomplete_runner
{
public:
    using set_type = typename S::set_type;
    static constexpr std::uint32_t npos = lcomplete_automaton< S >::npos;

private:
    const lcomplete_automaton< S >* _automaton;
    std::uint32_t _state = npos;
    std::size_t _time = 0;
    bool _sunk = false;
    std::optional< std::size_t > _sink_time;

public:
    explicit lcomplete_runner( const lcomplete_automaton< S >& automaton ) : _automaton{ &automaton } {}

    [[nodiscard]] bool sunk() const { return _sunk; }
    [[nodiscard]] std::optional< std::size_t > sink_time() const { return _sink_time; }
    [[nodiscard]] std::uint32_t state() const { return _state; }

    set_type feed( symbol_id w )
    {
        if ( index( w ) >= _automaton->alphabet_size() )
            throw unknown_symbol_error( "#" + std::to_string( index( w ) ) );
        if ( !_sunk )
        {
            _state = _time == 0 ? _automaton->initial( w ) : _automaton->next( _state, w );
            if ( _state == npos )
            {
                _sunk = true;
                _sink_time = _time;
            }
        }
        ++_time;
        return _sunk ? set_type{} : _automaton->annotation( _state );
    }
};

template < transition_system S >
[[nodiscard]] std::vector< typename S::set_type > online_estimate( const lcomplete_automaton< S >& automaton,
                                                                   std::span< const symbol_id > stream )
{
    lcomplete_runner< S > runner( automaton );
    std::vector< typename S::set_type > emitted;
    for ( auto w : stream )
        emitted.push_back( runner.feed( w ) );
    return emitted;
}

template < transition_system S >
[[nodiscard]] bool accepts( const lcomplete_automaton< S >& automaton, std::span< const symbol_id > stream )
{
    lcomplete_runner< S > runner( automaton );
    for ( auto w : stream )
        (void)runner.feed( w );
    return !runner.sunk();
}

} // namespace svest
