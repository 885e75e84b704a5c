#include "support.hpp"

#include <svest/chains.hpp>
#include <svest/decentralized.hpp>

#include <catch_amalgamated.hpp>

using namespace svest;

namespace
{

aggregation_suite m3_suite( const finite_state_machine& m )
{
    return aggregation_suite(
            { aggregation_function::from_names( m.alphabet(), { { "a", "g0" }, { "b", "g0" }, { "c", "g1" }, { "d", "g1" } } ),
              aggregation_function::from_names( m.alphabet(),
                                                { { "a", "h0" }, { "b", "h1" }, { "c", "h0" }, { "d", "h1" } } ) } );
}

// Fused sets for w, computed from scratch through the oracle of every distributed machine.
std::pair< state_set, state_set > fused_by_oracle( const finite_state_machine& m, const aggregation_suite& suite,
                                                   const std::vector< symbol_id >& w )
{
    state_set chi = m.full_set();
    state_set rho = m.full_set();
    for ( std::size_t k = 0; k < suite.size(); ++k )
    {
        const auto d = build_distributed( m, suite[ k ] ).machine;
        const auto e = brute_force_estimate( d, aggregate_string( suite[ k ], { w, 0 } ) );
        chi = intersect( chi, e.compatible );
        rho = intersect( rho, e.predicted );
    }
    return { chi, rho };
}

} // namespace

TEST_CASE( "identity suite reproduces the monolithic estimator" )
{
    const auto m = test::m1();
    finite_decentralized_estimator est( m, aggregation_suite( { aggregation_function::identity( m.alphabet() ) } ) );
    const auto trace = run_trace( est, m.parse( { "a", "a" } ), true );
    REQUIRE( trace.size() == 2 );
    CHECK( trace[ 0 ].fused_chi == m.states( { "s1", "s2" } ) );
    CHECK( trace[ 1 ].fused_chi == m.states( { "s2" } ) );
    CHECK( *trace[ 0 ].exact );
    CHECK( *trace[ 1 ].exact );

    std::mt19937 rng( Catch::getSeed() );
    for ( int i = 0; i < 20; ++i )
    {
        const auto r = test::random_machine( rng, 6, 3 );
        const auto report =
                verify_exactness( r, aggregation_suite( { aggregation_function::identity( r.alphabet() ) } ), 4 );
        CHECK( report.exact );
    }
}

TEST_CASE( "M2 with its synthesized suite is exact" )
{
    const auto m = test::m2();
    const auto suite = synthesize_suite( make_chain_partition( m ), 2 );

    finite_decentralized_estimator est( m, suite );
    const auto trace = run_trace( est, m.parse( { "a1", "a2" } ), true );
    REQUIRE( trace.size() == 2 );
    CHECK( *trace[ 0 ].exact );
    CHECK( *trace[ 1 ].exact );

    const auto report = verify_exactness( m, suite, 5 );
    CHECK( report.exact );
    CHECK( report.strings_checked > 0 );

    // The same claim against brute force, string by string.
    for ( const auto& w : test::all_strings( m.symbol_count(), 5 ) )
    {
        const auto mono = brute_force_estimate( m, { w, 0 } );
        if ( mono.compatible.empty() )
            continue;
        const auto [ chi, rho ] = fused_by_oracle( m, suite, w );
        CHECK( chi == mono.compatible );
        CHECK( rho == mono.predicted );
    }
}

TEST_CASE( "strict overapproximation on M3" )
{
    const auto m = test::m3();
    const auto suite = m3_suite( m );
    REQUIRE( check_consistency( suite ).consistent );

    finite_decentralized_estimator est( m, suite );
    const auto r = est.step( m.symbol( "a" ), true );
    CHECK( r.fused_chi == m.states( { "s1", "s2" } ) );
    CHECK( *r.monolithic_chi == m.states( { "s1" } ) );
    CHECK_FALSE( *r.exact );
    CHECK( r.monolithic_chi->is_subset_of( r.fused_chi ) );

    const auto report = verify_exactness( m, suite, 3 );
    CHECK_FALSE( report.exact );
    REQUIRE( report.counterexample );
    CHECK( m.names( *report.counterexample ) == std::vector< std::string >{ "a" } );
    CHECK( make_chain_partition( m ).blocks.size() > 1 );
}

TEST_CASE( "consistent suites over two symbols keep an injective coordinate" )
{
    // Merging a and b in one coordinate forces the other to separate them, which already
    // determines every symbol; M1 therefore has no strict-inclusion witness.
    const auto m = test::m1();
    const auto merged = aggregation_function::from_names( m.alphabet(), { { "a", "g" }, { "b", "g" } } );
    CHECK_FALSE( check_consistency( aggregation_suite( { merged, merged } ) ).consistent );
    const aggregation_suite suite( { merged, aggregation_function::identity( m.alphabet() ) } );
    CHECK( check_consistency( suite ).consistent );
    CHECK( verify_exactness( m, suite, 5 ).exact );
}

TEST_CASE( "empty estimates stay empty" )
{
    const auto m = test::m1();
    finite_decentralized_estimator est( m, aggregation_suite( { aggregation_function::identity( m.alphabet() ) } ) );
    const auto trace = run_trace( est, m.parse( { "b", "b", "a", "a" } ), false );
    for ( std::size_t t = 1; t < trace.size(); ++t )
    {
        CHECK( trace[ t ].fused_chi.empty() );
        CHECK( trace[ t ].fused_rho.empty() );
        CHECK_FALSE( trace[ t ].exact );
    }
}

TEST_CASE( "lazy monolithic comparison replays the history" )
{
    const auto m = test::m3();
    finite_decentralized_estimator est( m, m3_suite( m ) );
    (void)est.step( m.symbol( "d" ) );
    (void)est.step( m.symbol( "c" ) );
    const auto r = est.step( m.symbol( "b" ), true );
    CHECK( *r.monolithic_chi == estimate( m, m.parse( { "d", "c", "b" } ) ).compatible );
    est.reset();
    CHECK_FALSE( est.step( m.symbol( "a" ) ).monolithic_chi );
    CHECK_THROWS_AS( est.step( symbol_id{ 9 } ), unknown_symbol_error );
}

TEST_CASE( "mismatched machines are rejected" )
{
    const auto m = test::m1();
    const auto other = aggregation_function::identity( { "x", "y", "z" } );
    CHECK_THROWS_AS( verify_exactness( m, aggregation_suite( { other } ), 2 ), alphabet_mismatch_error );
    CHECK_THROWS_AS( decentralized_estimator< finite_state_machine >( m, {}, {} ), error );
}

TEST_CASE( "verify_exactness respects the budget" )
{
    const auto m = test::m2();
    CHECK_THROWS_AS( verify_exactness( m, synthesize_suite( make_chain_partition( m ), 2 ), 5, 3 ),
                     budget_exceeded_error );
}

TEST_CASE( "overapproximation and order independence on random machines" )
{
    std::mt19937 rng( Catch::getSeed() );
    for ( int i = 0; i < 40; ++i )
    {
        const auto m = test::random_machine( rng, 6, 5 );
        const auto suite = test::random_consistent_suite( rng, m.alphabet(), 2 + i % 2 );
        std::vector< aggregation_function > reversed( suite.begin(), suite.end() );
        std::reverse( reversed.begin(), reversed.end() );
        const aggregation_suite permuted( std::move( reversed ) );

        for ( const auto& w : test::all_strings( m.symbol_count(), 3 ) )
        {
            finite_decentralized_estimator a( m, suite );
            finite_decentralized_estimator b( m, permuted );
            const auto ta = a.run_trace( w, true );
            const auto tb = b.run_trace( w, false );
            const auto& last = ta.back();
            CHECK( last.monolithic_chi->is_subset_of( last.fused_chi ) );
            CHECK( last.monolithic_rho->is_subset_of( last.fused_rho ) );
            CHECK( last.fused_chi == tb.back().fused_chi );
            CHECK( last.fused_rho == tb.back().fused_rho );
            const auto [ chi, rho ] = fused_by_oracle( m, suite, w );
            CHECK( last.fused_chi == chi );
            CHECK( last.fused_rho == rho );
        }
    }
}

TEST_CASE( "synthesized suites are exact on random chain-decomposable machines" )
{
    std::mt19937 rng( Catch::getSeed() );
    for ( int i = 0; i < 40; ++i )
    {
        const auto m = test::random_chain_machine( rng, 6, 5 );
        const auto partition = make_chain_partition( m );
        for ( std::size_t p = 1; p <= 3; ++p )
        {
            const auto report = verify_exactness( m, synthesize_suite( partition, p ), 4 );
            CHECK( report.exact );
        }
    }
}
