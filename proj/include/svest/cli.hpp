#pragma once

#include "aggregation.hpp"
#include "chains.hpp"
#include "decentralized.hpp"
#include "estimator.hpp"
#include "io.hpp"
#include "lcomplete.hpp"
#include "machine.hpp"
#include "twotank.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace svest::cli
{

using io::json;

enum exit_code : int
{
    success = 0,
    domain_failure = 1,
    usage_error = 2
};

namespace detail
{

// Renders a JSON value as aligned text. Arrays of objects become one row per element;
// objects become key/value lines. Anything nested deeper is printed compactly.
inline std::string cell( const json& v )
{
    if ( v.is_string() )
        return v.get< std::string >();
    return v.dump();
}

inline void render_rows( std::ostream& out, const std::vector< std::string >& header,
                         const std::vector< std::vector< std::string > >& rows )
{
    std::vector< std::size_t > width( header.size() );
    for ( std::size_t c = 0; c < header.size(); ++c )
        width[ c ] = header[ c ].size();
    for ( const auto& r : rows )
        for ( std::size_t c = 0; c < r.size() && c < width.size(); ++c )
            width[ c ] = std::max( width[ c ], r[ c ].size() );
    auto line = [ & ]( const std::vector< std::string >& r ) {
        for ( std::size_t c = 0; c < header.size(); ++c )
        {
            const std::string text = c < r.size() ? r[ c ] : "";
            out << ( c == 0 ? "" : "  " ) << std::setw( static_cast< int >( width[ c ] ) )
                << ( c == 0 ? std::left : std::right ) << text;
        }
        out << '\n';
    };
    line( header );
    for ( const auto& r : rows )
        line( r );
}

inline void render_table( std::ostream& out, const json& value )
{
    if ( value.is_array() && !value.empty() && value.front().is_object() )
    {
        std::vector< std::string > header;
        for ( const auto& [ key, _ ] : value.front().items() )
            header.push_back( key );
        std::vector< std::vector< std::string > > rows;
        for ( const auto& row : value )
        {
            std::vector< std::string > cells;
            for ( const auto& key : header )
                cells.push_back( row.contains( key ) ? cell( row[ key ] ) : "" );
            rows.push_back( std::move( cells ) );
        }
        render_rows( out, header, rows );
    }
    else if ( value.is_object() )
    {
        std::vector< std::vector< std::string > > rows;
        for ( const auto& [ key, v ] : value.items() )
            rows.push_back( { key, cell( v ) } );
        render_rows( out, { "key", "value" }, rows );
    }
    else
        out << cell( value ) << '\n';
}

// Complexity layout: one row per l, columns |Z| and n_chi per automaton plus the distributed total.
inline void render_complexity( std::ostream& out, const json& rows )
{
    std::vector< std::string > header = { "convention", "ell" };
    std::vector< std::string > names;
    for ( const auto& column : rows.front().at( "automata" ) )
        names.push_back( column.at( "name" ).get< std::string >() );
    for ( const auto& n : names )
    {
        header.push_back( "|Z| " + n );
        header.push_back( "n_chi " + n );
    }
    const bool totals = rows.front().contains( "distributed_total" );
    if ( totals )
    {
        header.emplace_back( "|Z| sum_k" );
        header.emplace_back( "n_chi sum_k" );
    }
    std::vector< std::vector< std::string > > cells;
    for ( const auto& row : rows )
    {
        std::vector< std::string > r = { row.at( "convention" ).get< std::string >(), cell( row.at( "ell" ) ) };
        for ( const auto& column : row.at( "automata" ) )
        {
            r.push_back( cell( column.at( "states" ) ) );
            r.push_back( cell( column.at( "n_chi" ) ) );
        }
        if ( totals )
        {
            r.push_back( cell( row.at( "distributed_total" ).at( "states" ) ) );
            r.push_back( cell( row.at( "distributed_total" ).at( "n_chi" ) ) );
        }
        cells.push_back( std::move( r ) );
    }
    render_rows( out, header, cells );
}

inline json complexity_column( const std::string& name, const complexity_report& r )
{
    auto column = io::to_json( r );
    column[ "name" ] = name;
    return column;
}

inline std::vector< count_convention > conventions( const std::string& requested )
{
    if ( requested.empty() )
        return { count_convention::all, count_convention::feasible, count_convention::reachable };
    const auto c = parse_count_convention( requested );
    if ( !c )
        throw CLI::ValidationError( "--count", "expected all, feasible or reachable" );
    return { *c };
}

inline json twotank_complexity( std::size_t ell, const lcomplete_options& options,
                                const std::vector< count_convention >& which )
{
    const auto shapes = twotank::complexity_shapes( ell, options );
    json rows = json::array();
    for ( auto c : which )
    {
        const auto mono = make_complexity_report( shapes[ 0 ], c );
        const auto first = make_complexity_report( shapes[ 1 ], c );
        const auto second = make_complexity_report( shapes[ 2 ], c );
        rows.push_back( { { "convention", to_string( c ) },
                          { "ell", ell },
                          { "automata",
                            { complexity_column( "W", mono ), complexity_column( "V1", first ),
                              complexity_column( "V2", second ) } },
                          { "distributed_total",
                            { { "states", first.state_count + second.state_count },
                              { "n_chi", first.annotation_size + second.annotation_size },
                              { "n_chi_distinct", first.interned_size + second.interned_size } } } } );
    }
    return rows;
}

inline json set_json( const finite_state_machine& m, const state_set& s ) { return io::to_json( m, s ); }

inline json fusion_json( const finite_state_machine& m, const std::vector< finite_state_machine >& parts,
                         const aggregation_suite& suite, std::size_t t, symbol_id w,
                         const fusion_result< state_set >& r )
{
    json aggregated = json::array();
    json chi = json::array();
    json rho = json::array();
    for ( std::size_t k = 0; k < suite.size(); ++k )
    {
        aggregated.push_back( parts[ k ].name( suite[ k ]( w ) ) );
        chi.push_back( set_json( m, r.chi[ k ] ) );
        rho.push_back( set_json( m, r.rho[ k ] ) );
    }
    json step = { { "t", t },
                  { "symbol", m.name( w ) },
                  { "aggregated", std::move( aggregated ) },
                  { "chi", std::move( chi ) },
                  { "rho", std::move( rho ) },
                  { "fused_chi", set_json( m, r.fused_chi ) },
                  { "fused_rho", set_json( m, r.fused_rho ) } };
    if ( r.monolithic_chi )
    {
        step[ "monolithic_chi" ] = set_json( m, *r.monolithic_chi );
        step[ "monolithic_rho" ] = set_json( m, *r.monolithic_rho );
        step[ "exact" ] = *r.exact;
    }
    return step;
}

inline json report_json( const validation_report& r )
{
    return { { "ok", r.ok() },
             { "blocking", r.blocking },
             { "sourceless", r.sourceless },
             { "dangling", r.dangling },
             { "duplicates", r.duplicates },
             { "initial_is_all_states", r.initial_is_all_states } };
}

inline json estimate_json( const finite_state_machine& m, const estimate_pair< state_set >& e )
{
    return { { "chi", set_json( m, e.compatible ) }, { "rho", set_json( m, e.predicted ) } };
}

} // namespace detail

// Runs one command line (without the program name). Structured output goes to `out`,
// diagnostics to `err`; the return value is the process exit code.
inline int run( const std::vector< std::string >& args, std::ostream& out, std::ostream& err )
{
    CLI::App app{ "Set-valued state estimation on finite and hybrid state machines", "svest" };
    app.require_subcommand( 1 );
    app.fallthrough();

    std::string format = "json";
    std::size_t jobs = 1;
    app.add_option( "--format", format, "Output format" )->check( CLI::IsMember( { "json", "table" } ) );
    app.add_option( "--jobs", jobs, "Worker threads for automaton construction" )->check( CLI::Range( 1, 256 ) );

    std::string machine_path;
    std::string suite_path;
    std::string output_path;
    std::vector< std::string > string_arg;
    std::vector< std::string > block_arg;
    std::size_t tau = 0;
    std::size_t horizon = 0;
    std::size_t length = 0;
    std::size_t p = 2;
    std::size_t k = 0;
    std::size_t ell = 2;
    std::size_t steps = 8;
    std::string count;
    std::string observe = "both";
    std::string trace_path;
    std::string sets_path;
    bool oracle = false;
    bool compare = false;
    bool report = false;
    bool use_twotank = false;

    auto* validate_cmd = app.add_subcommand( "validate", "Check structural assumptions of a machine" );
    validate_cmd->add_option( "machine", machine_path )->required();

    auto* estimate_cmd = app.add_subcommand( "estimate", "Compatible and predicted sets for a string" );
    estimate_cmd->add_option( "machine", machine_path )->required();
    estimate_cmd->add_option( "--string", string_arg, "Comma-separated symbols" )->required()->delimiter( ',' );
    estimate_cmd->add_option( "--tau", tau, "Start time of the string" );
    estimate_cmd->add_option( "--horizon", horizon, "Time-anchored oracle horizon" );
    estimate_cmd->add_flag( "--oracle", oracle, "Cross-check against run enumeration" );

    auto* oracle_cmd = app.add_subcommand( "oracle", "Brute-force estimates or run enumeration" );
    oracle_cmd->add_option( "machine", machine_path )->required();
    auto* oracle_string = oracle_cmd->add_option( "--string", string_arg )->delimiter( ',' );
    auto* oracle_length = oracle_cmd->add_option( "--length", length, "Enumerate all runs of this length" );
    oracle_cmd->add_option( "--tau", tau );
    oracle_cmd->add_option( "--horizon", horizon );
    oracle_string->excludes( oracle_length );

    auto* decompose_cmd = app.add_subcommand( "decompose", "Chain partition and synthesized suite" );
    decompose_cmd->add_option( "machine", machine_path )->required();
    decompose_cmd->add_option( "--p", p, "Number of aggregation functions" )->check( CLI::Range( 1, 64 ) );
    decompose_cmd->add_option( "-o,--output", output_path );

    auto* chains_cmd = app.add_subcommand( "chains", "Partition into non-deterministic chains" );
    chains_cmd->add_option( "machine", machine_path )->required();
    chains_cmd->add_option( "--block", block_arg, "Check a single symbol block" )->delimiter( ',' );

    auto* distribute_cmd = app.add_subcommand( "distribute", "Distributed machines of a suite" );
    distribute_cmd->add_option( "machine", machine_path )->required();
    distribute_cmd->add_option( "suite", suite_path )->required();
    distribute_cmd->add_option( "--k", k, "Only the k-th machine (1-based)" );

    auto* decentralized_cmd = app.add_subcommand( "decentralized", "Fused decentralized estimation" );
    decentralized_cmd->add_option( "machine", machine_path )->required();
    decentralized_cmd->add_option( "suite", suite_path )->required();
    decentralized_cmd->add_option( "--string", string_arg )->required()->delimiter( ',' );
    decentralized_cmd->add_flag( "--compare", compare, "Also run the monolithic estimator" );

    auto* lcomplete_cmd = app.add_subcommand( "lcomplete", "Build an l-complete approximation automaton" );
    auto* lc_machine = lcomplete_cmd->add_option( "machine", machine_path );
    auto* lc_twotank = lcomplete_cmd->add_flag( "--twotank", use_twotank, "Use the two-tank system" );
    lc_machine->excludes( lc_twotank );
    lcomplete_cmd->add_option( "--observe", observe, "Two-tank channels" )
            ->check( CLI::IsMember( { "both", "first", "second" } ) );
    lcomplete_cmd->add_option( "--ell", ell )->required()->check( CLI::Range( 1, 16 ) );
    lcomplete_cmd->add_option( "-o,--output", output_path );
    lcomplete_cmd->add_flag( "--report", report, "Print the complexity report" );
    lcomplete_cmd->add_option( "--count", count, "all | feasible | reachable" );
    lcomplete_cmd->add_option( "--stream", string_arg, "Run the automaton online" )->delimiter( ',' );

    auto* twotank_cmd = app.add_subcommand( "twotank", "Two-tank experiment" );
    twotank_cmd->add_option( "--ell", ell )->check( CLI::Range( 1, 16 ) );
    twotank_cmd->add_option( "--steps", steps )->check( CLI::Range( 1, 8 ) );
    twotank_cmd->add_option( "--trace", trace_path, "Write the per-step trace" );
    twotank_cmd->add_option( "--emit-sets", sets_path, "Write estimate vertex lists" );
    twotank_cmd->add_flag( "--report", report, "Complexity of the three automata" );
    twotank_cmd->add_option( "--count", count, "all | feasible | reachable" );

    auto* report_cmd = app.add_subcommand( "report", "Complexity of a saved automaton" );
    report_cmd->add_option( "automaton", machine_path )->required();
    report_cmd->add_option( "--count", count, "all | feasible | reachable" );

    std::vector< std::string > reversed( args.rbegin(), args.rend() );
    try
    {
        app.parse( reversed );
    }
    catch ( const CLI::ParseError& e )
    {
        if ( e.get_exit_code() == 0 )
        {
            (void)app.exit( e, out, err );
            return success;
        }
        err << e.what() << "\n\n" << app.help();
        return usage_error;
    }

    auto emit = [ & ]( const json& value ) {
        if ( format == "table" )
            detail::render_table( out, value );
        else
            out << value.dump( 2 ) << '\n';
    };

    try
    {
        if ( *validate_cmd )
        {
            const auto desc = io::parse_machine( io::read_json_file( machine_path ) );
            const auto r = validate( desc );
            emit( detail::report_json( r ) );
            if ( !r.ok() )
            {
                err << "invalid machine: " << r.summary() << '\n';
                return domain_failure;
            }
            return success;
        }

        if ( *estimate_cmd )
        {
            const auto m = io::read_machine( machine_path );
            const auto w = m.parse( string_arg, tau );
            const auto e = estimate( m, w );
            auto result = detail::estimate_json( m, e );
            if ( oracle )
            {
                const auto b = brute_force_estimate( m, w, horizon );
                result[ "oracle" ] = detail::estimate_json( m, b );
                result[ "agree" ] = b == e;
                emit( result );
                return b == e ? success : domain_failure;
            }
            emit( result );
            return success;
        }

        if ( *oracle_cmd )
        {
            const auto m = io::read_machine( machine_path );
            if ( !string_arg.empty() )
            {
                emit( detail::estimate_json( m, brute_force_estimate( m, m.parse( string_arg, tau ), horizon ) ) );
                return success;
            }
            if ( length == 0 )
                throw CLI::ValidationError( "oracle", "need --string or a positive --length" );
            json runs = json::array();
            for ( const auto& r : enumerate_runs( m, length ) )
            {
                json states = json::array();
                for ( auto s : r.states )
                    states.push_back( m.name( s ) );
                json symbols = json::array();
                for ( auto s : r.symbols )
                    symbols.push_back( m.name( s ) );
                runs.push_back( { { "states", std::move( states ) }, { "symbols", std::move( symbols ) } } );
            }
            emit( runs );
            return success;
        }

        if ( *decompose_cmd )
        {
            const auto m = io::read_machine( machine_path );
            const auto suite = io::to_json( synthesize_suite( make_chain_partition( m ), p ) );
            if ( !output_path.empty() )
                io::write_json_file( output_path, suite );
            emit( suite );
            return success;
        }

        if ( *chains_cmd )
        {
            const auto m = io::read_machine( machine_path );
            if ( !block_arg.empty() )
            {
                const auto check = is_nondeterministic_chain( m, block_arg );
                json result = { { "chain", check.is_chain() } };
                if ( check.violation )
                {
                    const auto& v = *check.violation;
                    auto edge = [ & ]( const transition& t ) {
                        return json::array( { m.name( t.source ), m.name( t.symbol ), m.name( t.target ) } );
                    };
                    result[ "violation" ] = json{
                        { "condition",
                          v.condition == chain_condition::single_emission ? "single_emission" : "single_predecessor" },
                        { "first", edge( v.first ) },
                        { "second", edge( v.second ) } };
                }
                emit( result );
                return check.is_chain() ? success : domain_failure;
            }
            emit( io::to_json( m, make_chain_partition( m ) ) );
            return success;
        }

        if ( *distribute_cmd )
        {
            const auto m = io::read_machine( machine_path );
            const auto suite = io::parse_suite( io::read_json_file( suite_path ), m.alphabet() );
            if ( k > suite.size() )
                throw CLI::ValidationError( "--k", "suite has only " + std::to_string( suite.size() ) + " functions" );
            json machines = json::array();
            for ( std::size_t i = 0; i < suite.size(); ++i )
                if ( k == 0 || k == i + 1 )
                    machines.push_back( io::to_json( build_distributed( m, suite[ i ], i + 1 ).machine ) );
            emit( k == 0 ? machines : machines.front() );
            return success;
        }

        if ( *decentralized_cmd )
        {
            const auto m = io::read_machine( machine_path );
            const auto suite = io::parse_suite( io::read_json_file( suite_path ), m.alphabet() );
            const auto w = m.parse( string_arg );
            finite_decentralized_estimator est( m, suite );
            std::vector< finite_state_machine > parts;
            for ( std::size_t i = 0; i < suite.size(); ++i )
                parts.push_back( est.machine( i ) );
            json trace = json::array();
            for ( std::size_t t = 0; t < w.symbols.size(); ++t )
                trace.push_back( detail::fusion_json( m, parts, suite, t, w.symbols[ t ],
                                                      est.step( w.symbols[ t ], compare ) ) );
            emit( trace );
            return success;
        }

        if ( *lcomplete_cmd )
        {
            const lcomplete_options options{ enumeration_budget(), jobs };
            const auto which = detail::conventions( count );
            auto finish = [ & ]( const auto& automaton, const auto& names, const std::string& kind, auto annotate,
                                 auto parse_stream ) {
                if ( !output_path.empty() || ( !report && string_arg.empty() ) )
                {
                    const auto doc = io::to_json( automaton, names, kind, annotate );
                    if ( output_path.empty() )
                    {
                        out << doc.dump( 2 ) << '\n';
                        return success;
                    }
                    io::write_json_file( output_path, doc );
                }
                if ( report )
                {
                    json rows = json::array();
                    for ( auto c : which )
                        rows.push_back( { { "convention", to_string( c ) },
                                          { "ell", ell },
                                          { "automata", { detail::complexity_column( kind, complexity( automaton, c ) ) } } } );
                    if ( format == "table" )
                        detail::render_complexity( out, rows );
                    else
                        out << rows.dump( 2 ) << '\n';
                }
                if ( !string_arg.empty() )
                {
                    const auto stream = parse_stream( string_arg );
                    json emitted = json::array();
                    std::size_t t = 0;
                    for ( const auto& s : online_estimate( automaton, stream ) )
                        emitted.push_back( { { "t", t }, { "symbol", string_arg[ t++ ] }, { "chi", annotate( s ) } } );
                    emit( emitted );
                }
                return success;
            };

            if ( use_twotank )
            {
                const auto o = observe == "first"    ? twotank::observation::first
                               : observe == "second" ? twotank::observation::second
                                                     : twotank::observation::both;
                const twotank::system sys( o );
                const auto names = twotank::alphabet( o );
                const auto automaton = build_lcomplete( sys, ell, options );
                return finish(
                        automaton, names, "twotank-" + observe, []( const polygon& s ) { return io::to_json( s ); },
                        [ & ]( const std::vector< std::string >& symbols ) {
                            std::vector< symbol_id > ids;
                            for ( const auto& s : symbols )
                            {
                                const auto it = std::find( names.begin(), names.end(), s );
                                if ( it == names.end() )
                                    throw unknown_symbol_error( s );
                                ids.push_back( symbol_id{ static_cast< std::uint32_t >( it - names.begin() ) } );
                            }
                            return ids;
                        } );
            }
            if ( machine_path.empty() )
                throw CLI::ValidationError( "lcomplete", "need a machine file or --twotank" );
            const auto m = io::read_machine( machine_path );
            const auto automaton = build_lcomplete( m, ell, options );
            return finish(
                    automaton, m.alphabet(), "machine", [ & ]( const state_set& s ) { return io::to_json( m, s ); },
                    [ & ]( const std::vector< std::string >& symbols ) { return m.parse( symbols ).symbols; } );
        }

        if ( *twotank_cmd )
        {
            auto inputs = twotank::reference_inputs();
            inputs.resize( steps );
            const auto run = twotank::simulate( { 0, 0 }, inputs );
            const auto trace = twotank::window_trace( run, ell );
            const auto monolithic = twotank::alphabet( twotank::observation::both );
            const auto suite = twotank::output_suite();

            bool contained = true;
            bool exact = true;
            json steps_json = json::array();
            json sets = json::array();
            for ( const auto& s : trace )
            {
                contained = contained && s.contained;
                exact = exact && s.exact;
                steps_json.push_back( { { "t", s.time },
                                        { "state", { io::to_json( s.state.x ), io::to_json( s.state.y ) } },
                                        { "symbol", monolithic[ index( s.observed ) ] },
                                        { "aggregated",
                                          { twotank::symbol_name( twotank::observation::first, suite[ 0 ]( s.observed ) ),
                                            twotank::symbol_name( twotank::observation::second,
                                                                  suite[ 1 ]( s.observed ) ) } },
                                        { "contained", s.contained },
                                        { "exact", s.exact } } );
                sets.push_back( { { "t", s.time },
                                  { "monolithic", io::to_json( s.monolithic ) },
                                  { "distributed", { io::to_json( s.distributed[ 0 ] ), io::to_json( s.distributed[ 1 ] ) } },
                                  { "fused", io::to_json( s.fused ) } } );
            }
            if ( !trace_path.empty() )
                io::write_json_file( trace_path, steps_json );
            if ( !sets_path.empty() )
                io::write_json_file( sets_path, sets );

            if ( report )
            {
                const auto rows = detail::twotank_complexity( ell, { enumeration_budget(), jobs },
                                                              detail::conventions( count ) );
                if ( format == "table" )
                    detail::render_complexity( out, rows );
                else
                    out << json{ { "ell", ell }, { "steps", steps }, { "contained", contained }, { "exact", exact },
                                 { "complexity", rows } }
                                    .dump( 2 )
                        << '\n';
            }
            else if ( format == "table" )
                detail::render_table( out, steps_json );
            else
                out << json{ { "ell", ell }, { "steps", steps }, { "contained", contained }, { "exact", exact },
                             { "trace", steps_json } }
                                .dump( 2 )
                    << '\n';
            return contained && exact ? success : domain_failure;
        }

        if ( *report_cmd )
        {
            const auto doc = io::read_json_file( machine_path );
            const auto shape = io::parse_lcomplete_shape( doc );
            const std::string kind = doc.value( "kind", std::string( "automaton" ) );
            json rows = json::array();
            for ( auto c : detail::conventions( count ) )
                rows.push_back( { { "convention", to_string( c ) },
                                  { "ell", shape.ell },
                                  { "automata",
                                    { detail::complexity_column( kind, make_complexity_report( shape, c ) ) } } } );
            if ( format == "table" )
                detail::render_complexity( out, rows );
            else
                out << rows.dump( 2 ) << '\n';
            return success;
        }
    }
    catch ( const CLI::Error& e )
    {
        err << e.what() << '\n';
        return usage_error;
    }
    catch ( const error& e )
    {
        err << e.what() << '\n';
        return domain_failure;
    }
    catch ( const json::exception& e )
    {
        err << e.what() << '\n';
        return domain_failure;
    }
    return usage_error;
}

} // namespace svest::cli
