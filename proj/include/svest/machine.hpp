#pragma once

#include "error.hpp"
#include "state_set.hpp"

#include <array>
#include <cstdlib>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace svest
{

inline constexpr std::size_t default_enumeration_budget = 1'000'000;

// SVEST_BUDGET overrides the default when set to a positive integer.
[[nodiscard]] inline std::size_t enumeration_budget()
{
    if ( const char* env = std::getenv( "SVEST_BUDGET" ) )
    {
        char* end = nullptr;
        const unsigned long long value = std::strtoull( env, &end, 10 );
        if ( end != env && *end == '\0' && value > 0 )
            return static_cast< std::size_t >( value );
    }
    return default_enumeration_budget;
}

struct transition
{
    state_id source;
    symbol_id symbol;
    state_id target;

    friend bool operator==( const transition&, const transition& ) = default;
    friend auto operator<=>( const transition&, const transition& ) = default;
};

// A window w|[tau, tau + size - 1] of an external signal.
struct signal_string
{
    std::vector< symbol_id > symbols;
    std::size_t start_time = 0;

    [[nodiscard]] std::size_t size() const { return symbols.size(); }
    [[nodiscard]] std::size_t end_time() const { return start_time + symbols.size() - 1; }

    friend bool operator==( const signal_string&, const signal_string& ) = default;
    friend auto operator<=>( const signal_string&, const signal_string& ) = default;
};

// Unvalidated, name-based form of a machine, as read from JSON.
struct machine_description
{
    std::vector< std::string > states;
    std::vector< std::string > alphabet;
    std::vector< std::array< std::string, 3 > > transitions;
    std::optional< std::vector< std::string > > initial;
};

struct validation_report
{
    std::vector< std::string > blocking;
    std::vector< std::string > sourceless;   // warning only
    std::vector< std::string > dangling;     // undeclared states / symbols referenced
    std::vector< std::string > duplicates;   // repeated declarations
    bool initial_is_all_states = true;      // warning only

    [[nodiscard]] bool ok() const { return blocking.empty() && dangling.empty() && duplicates.empty(); }

    [[nodiscard]] std::string summary() const
    {
        std::string text;
        auto append = [ & ]( const char* what, const std::vector< std::string >& items ) {
            if ( items.empty() )
                return;
            text += text.empty() ? "" : "; ";
            text += what;
            for ( std::size_t i = 0; i < items.size(); ++i )
                text += ( i == 0 ? " " : ", " ) + items[ i ];
        };
        append( "blocking states:", blocking );
        append( "dangling references:", dangling );
        append( "duplicate declarations:", duplicates );
        return text;
    }
};

[[nodiscard]] inline validation_report validate( const machine_description& desc )
{
    validation_report report;

    std::unordered_map< std::string, std::size_t > state_index;
    std::set< std::string > symbols;
    for ( const auto& s : desc.states )
    {
        if ( s.empty() )
            report.dangling.push_back( "empty state name" );
        else if ( !state_index.emplace( s, state_index.size() ).second )
            report.duplicates.push_back( "state " + s );
    }
    for ( const auto& w : desc.alphabet )
    {
        if ( w.empty() )
            report.dangling.push_back( "empty symbol name" );
        else if ( !symbols.insert( w ).second )
            report.duplicates.push_back( "symbol " + w );
    }

    std::vector< bool > has_out( state_index.size(), false );
    std::vector< bool > has_in( state_index.size(), false );
    for ( const auto& [ src, sym, tgt ] : desc.transitions )
    {
        const auto s = state_index.find( src );
        const auto t = state_index.find( tgt );
        const bool known_symbol = symbols.count( sym ) > 0;
        if ( s == state_index.end() )
            report.dangling.push_back( "transition (" + src + "," + sym + "," + tgt + ") source " + src );
        if ( t == state_index.end() )
            report.dangling.push_back( "transition (" + src + "," + sym + "," + tgt + ") target " + tgt );
        if ( !known_symbol )
            report.dangling.push_back( "transition (" + src + "," + sym + "," + tgt + ") symbol " + sym );
        if ( s != state_index.end() && t != state_index.end() && known_symbol )
        {
            has_out[ s->second ] = true;
            has_in[ t->second ] = true;
        }
    }

    std::vector< bool > seen( state_index.size(), false );
    for ( const auto& s : desc.states )
    {
        const auto it = state_index.find( s );
        if ( it == state_index.end() || seen[ it->second ] )
            continue;
        seen[ it->second ] = true;
        if ( !has_out[ it->second ] )
            report.blocking.push_back( s );
        if ( !has_in[ it->second ] )
            report.sourceless.push_back( s );
    }

    if ( desc.initial )
    {
        std::set< std::string > init;
        for ( const auto& s : *desc.initial )
        {
            if ( !state_index.count( s ) )
                report.dangling.push_back( "initial state " + s );
            init.insert( s );
        }
        report.initial_is_all_states = init.size() == state_index.size();
    }
    return report;
}

// P = (X, W, Delta, X0). Immutable once constructed; always non-blocking.
class finite_state_machine
{
    std::vector< std::string > _states;
    std::vector< std::string > _alphabet;
    std::unordered_map< std::string, state_id > _state_index;
    std::unordered_map< std::string, symbol_id > _symbol_index;
    std::vector< transition > _transitions;
    state_set _initial;

    std::vector< state_set > _sources;                          // chi(w) per symbol
    std::vector< std::vector< std::vector< state_id > > > _post; // [symbol][state] -> successors

public:
    using set_type = state_set;

    explicit finite_state_machine( const machine_description& desc )
    {
        const auto report = validate( desc );
        if ( !report.ok() )
            throw invalid_machine_error( "invalid machine: " + report.summary() );

        std::vector< transition > transitions;
        _states = desc.states;
        _alphabet = desc.alphabet;
        index_names();
        for ( const auto& [ src, sym, tgt ] : desc.transitions )
            transitions.push_back( { _state_index.at( src ), _symbol_index.at( sym ), _state_index.at( tgt ) } );

        state_set initial = state_set::all( state_count() );
        if ( desc.initial )
        {
            std::vector< state_id > ids;
            for ( const auto& s : *desc.initial )
                ids.push_back( _state_index.at( s ) );
            initial = state_set( std::move( ids ) );
        }
        build( std::move( transitions ), std::move( initial ) );
    }

    // Index-based construction; names must be unique and transitions in range.
    finite_state_machine( std::vector< std::string > states, std::vector< std::string > alphabet,
                          std::vector< transition > transitions, std::optional< state_set > initial = {} )
            : _states{ std::move( states ) }, _alphabet{ std::move( alphabet ) }
    {
        index_names();
        for ( const auto& t : transitions )
            if ( index( t.source ) >= _states.size() || index( t.target ) >= _states.size()
                 || index( t.symbol ) >= _alphabet.size() )
                throw invalid_machine_error( "transition index out of range" );
        build( std::move( transitions ), initial ? std::move( *initial ) : state_set::all( state_count() ) );
    }

    [[nodiscard]] std::uint32_t state_count() const { return static_cast< std::uint32_t >( _states.size() ); }
    [[nodiscard]] std::uint32_t symbol_count() const { return static_cast< std::uint32_t >( _alphabet.size() ); }
    [[nodiscard]] const std::vector< std::string >& state_names() const { return _states; }
    [[nodiscard]] const std::vector< std::string >& alphabet() const { return _alphabet; }
    [[nodiscard]] const std::vector< transition >& transitions() const { return _transitions; }
    [[nodiscard]] const state_set& initial() const { return _initial; }
    [[nodiscard]] const std::string& name( state_id s ) const { return _states.at( index( s ) ); }
    [[nodiscard]] const std::string& name( symbol_id w ) const { return _alphabet.at( index( w ) ); }

    [[nodiscard]] state_id state( const std::string& name ) const
    {
        const auto it = _state_index.find( name );
        if ( it == _state_index.end() )
            throw unknown_state_error( name );
        return it->second;
    }

    [[nodiscard]] symbol_id symbol( const std::string& name ) const
    {
        const auto it = _symbol_index.find( name );
        if ( it == _symbol_index.end() )
            throw unknown_symbol_error( name );
        return it->second;
    }

    [[nodiscard]] signal_string parse( const std::vector< std::string >& names, std::size_t start_time = 0 ) const
    {
        signal_string w{ {}, start_time };
        for ( const auto& n : names )
            w.symbols.push_back( symbol( n ) );
        return w;
    }

    [[nodiscard]] state_set states( const std::vector< std::string >& names ) const
    {
        std::vector< state_id > ids;
        for ( const auto& n : names )
            ids.push_back( state( n ) );
        return state_set( std::move( ids ) );
    }

    [[nodiscard]] std::vector< std::string > names( const state_set& set ) const
    {
        std::vector< std::string > result;
        for ( auto s : set )
            result.push_back( name( s ) );
        return result;
    }

    [[nodiscard]] std::vector< std::string > names( const signal_string& w ) const
    {
        std::vector< std::string > result;
        for ( auto s : w.symbols )
            result.push_back( name( s ) );
        return result;
    }

    [[nodiscard]] state_set full_set() const { return state_set::all( state_count() ); }

    // chi(w) = { xi ; exists xi', (xi, w, xi') in Delta }
    [[nodiscard]] const state_set& chi_symbol( symbol_id w ) const
    {
        check( w );
        return _sources[ index( w ) ];
    }

    [[nodiscard]] const std::vector< state_id >& successors( state_id s, symbol_id w ) const
    {
        check( w );
        return _post[ index( w ) ][ index( s ) ];
    }

    // Union of w-successors over `from`.
    [[nodiscard]] state_set rho_hat( symbol_id w, const state_set& from ) const
    {
        check( w );
        std::vector< state_id > result;
        for ( auto s : from )
        {
            const auto& next = _post[ index( w ) ][ index( s ) ];
            result.insert( result.end(), next.begin(), next.end() );
        }
        return state_set( std::move( result ) );
    }

private:
    void check( symbol_id w ) const
    {
        if ( index( w ) >= _alphabet.size() )
            throw unknown_symbol_error( "#" + std::to_string( index( w ) ) );
    }

    void index_names()
    {
        for ( std::size_t i = 0; i < _states.size(); ++i )
            if ( !_state_index.emplace( _states[ i ], state_id{ static_cast< std::uint32_t >( i ) } ).second )
                throw invalid_machine_error( "duplicate state " + _states[ i ] );
        for ( std::size_t i = 0; i < _alphabet.size(); ++i )
            if ( !_symbol_index.emplace( _alphabet[ i ], symbol_id{ static_cast< std::uint32_t >( i ) } ).second )
                throw invalid_machine_error( "duplicate symbol " + _alphabet[ i ] );
    }

    void build( std::vector< transition > transitions, state_set initial )
    {
        std::sort( transitions.begin(), transitions.end() );
        transitions.erase( std::unique( transitions.begin(), transitions.end() ), transitions.end() );
        _transitions = std::move( transitions );
        _initial = std::move( initial );

        _post.assign( _alphabet.size(), std::vector< std::vector< state_id > >( _states.size() ) );
        std::vector< std::vector< state_id > > sources( _alphabet.size() );
        std::vector< bool > has_out( _states.size(), false );
        for ( const auto& t : _transitions )
        {
            _post[ index( t.symbol ) ][ index( t.source ) ].push_back( t.target );
            sources[ index( t.symbol ) ].push_back( t.source );
            has_out[ index( t.source ) ] = true;
        }
        for ( std::size_t s = 0; s < _states.size(); ++s )
            if ( !has_out[ s ] )
                throw invalid_machine_error( "invalid machine: blocking states: " + _states[ s ] );
        _sources.clear();
        for ( auto& src : sources )
            _sources.emplace_back( std::move( src ) );
    }
};

[[nodiscard]] inline validation_report validate( const finite_state_machine& m )
{
    machine_description desc{ m.state_names(), m.alphabet(), {}, m.names( m.initial() ) };
    for ( const auto& t : m.transitions() )
        desc.transitions.push_back( { m.name( t.source ), m.name( t.symbol ), m.name( t.target ) } );
    return validate( desc );
}

struct run
{
    std::vector< state_id > states;    // x|[0, length]
    std::vector< symbol_id > symbols;  // w|[0, length - 1]

    friend bool operator==( const run&, const run& ) = default;
    friend auto operator<=>( const run&, const run& ) = default;
};

// Exact number of runs of the given length from X0, saturating at SIZE_MAX.
[[nodiscard]] inline std::size_t count_runs( const finite_state_machine& m, std::size_t length )
{
    constexpr auto cap = std::numeric_limits< std::size_t >::max();
    std::vector< std::size_t > ways( m.state_count(), 0 );
    for ( auto s : m.initial() )
        ways[ index( s ) ] = 1;
    for ( std::size_t step = 0; step < length; ++step )
    {
        std::vector< std::size_t > next( m.state_count(), 0 );
        for ( const auto& t : m.transitions() )
        {
            auto& slot = next[ index( t.target ) ];
            const auto add = ways[ index( t.source ) ];
            slot = ( cap - slot < add ) ? cap : slot + add;
        }
        ways = std::move( next );
    }
    std::size_t total = 0;
    for ( auto w : ways )
        total = ( cap - total < w ) ? cap : total + w;
    return total;
}

// All pairs (x|[0,length], w|[0,length-1]) of the full behavior restricted to [0, length].
[[nodiscard]] inline std::vector< run > enumerate_runs( const finite_state_machine& m, std::size_t length,
                                                        std::size_t budget = enumeration_budget() )
{
    if ( length == 0 )
        throw error( "run length must be positive" );
    const std::size_t bound = count_runs( m, length );
    if ( bound > budget )
        throw budget_exceeded_error( bound, budget );

    std::vector< run > runs;
    runs.reserve( bound );
    for ( auto s : m.initial() )
        runs.push_back( { { s }, {} } );
    for ( std::size_t step = 0; step < length; ++step )
    {
        std::vector< run > next;
        for ( const auto& r : runs )
            for ( const auto& t : m.transitions() )
                if ( t.source == r.states.back() )
                {
                    run extended = r;
                    extended.states.push_back( t.target );
                    extended.symbols.push_back( t.symbol );
                    next.push_back( std::move( extended ) );
                }
        runs = std::move( next );
    }
    std::sort( runs.begin(), runs.end() );
    return runs;
}

} // namespace svest
