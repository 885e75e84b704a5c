#include "support.hpp"

#include <svest/estimator.hpp>

#include <catch_amalgamated.hpp>

using namespace svest;
using svest::test::m1;

namespace
{

state_set states( const finite_state_machine& m, std::initializer_list< const char* > names )
{
    return m.states( std::vector< std::string >( names.begin(), names.end() ) );
}

} // namespace

TEST_CASE( "chi_symbol and rho_hat on M1" )
{
    const auto m = m1();
    const auto a = m.symbol( "a" );
    const auto b = m.symbol( "b" );
    CHECK( m.chi_symbol( a ) == states( m, { "s1", "s2" } ) );
    CHECK( m.chi_symbol( b ) == states( m, { "s2", "s3" } ) );
    CHECK( m.rho_hat( a, states( m, { "s1" } ) ) == states( m, { "s2" } ) );
    CHECK( m.rho_hat( a, states( m, { "s1", "s2" } ) ) == states( m, { "s2", "s3" } ) );
    CHECK( m.rho_hat( b, {} ).empty() );
    CHECK_THROWS_AS( m.chi_symbol( symbol_id{ 7 } ), unknown_symbol_error );
}

TEST_CASE( "symbol without transitions has an empty chi" )
{
    const finite_state_machine m( { "x" }, { "a", "z" }, { { state_id{ 0 }, symbol_id{ 0 }, state_id{ 0 } } } );
    CHECK( m.chi_symbol( symbol_id{ 1 } ).empty() );
    CHECK_FALSE( is_feasible( m, m.parse( { "z" } ) ) );
}

TEST_CASE( "estimate on M1" )
{
    const auto m = m1();
    auto e = estimate( m, m.parse( { "a" } ) );
    CHECK( e.compatible == states( m, { "s1", "s2" } ) );
    CHECK( e.predicted == states( m, { "s2", "s3" } ) );

    e = estimate( m, m.parse( { "a", "a" } ) );
    CHECK( e.compatible == states( m, { "s2" } ) );
    CHECK( e.predicted == states( m, { "s3" } ) );

    e = estimate( m, m.parse( { "b", "b" } ) );
    CHECK( e.compatible.empty() );
    CHECK( e.predicted.empty() );

    e = estimate( m, m.parse( { "a", "a", "b" } ) );
    CHECK( e.compatible == states( m, { "s3" } ) );
    CHECK( e.predicted == states( m, { "s1" } ) );
}

TEST_CASE( "estimate rejects empty strings and unknown symbols" )
{
    const auto m = m1();
    CHECK_THROWS_AS( estimate( m, signal_string{} ), error );
    CHECK_THROWS_AS( estimate( m, signal_string{ { symbol_id{ 5 } }, 0 } ), unknown_symbol_error );
}

TEST_CASE( "incremental feeding on M1" )
{
    const auto m = m1();
    estimator_state< finite_state_machine > s( m );
    CHECK( s.predicted() == m.full_set() );
    s = s.feed( m.symbol( "a" ) );
    CHECK( s.compatible() == states( m, { "s1", "s2" } ) );
    CHECK( s.predicted() == states( m, { "s2", "s3" } ) );
    s = estimate_incremental( s, m.symbol( "a" ) );
    CHECK( s.predicted() == states( m, { "s3" } ) );
    s = s.feed( m.symbol( "b" ) );
    CHECK( s.compatible() == states( m, { "s3" } ) );
    CHECK( s.predicted() == states( m, { "s1" } ) );
    CHECK( s.steps() == 3 );
}

TEST_CASE( "brute-force oracle on M1" )
{
    const auto m = m1();
    auto e = brute_force_estimate( m, m.parse( { "a", "a" } ) );
    CHECK( e.compatible == states( m, { "s2" } ) );
    CHECK( e.predicted == states( m, { "s3" } ) );

    e = brute_force_estimate( m, m.parse( { "a" }, 1 ), 1 );
    CHECK( e.compatible == states( m, { "s1", "s2" } ) );
    CHECK( e.predicted == states( m, { "s2", "s3" } ) );

    for ( std::uint32_t w = 0; w < 2; ++w )
    {
        const auto single = brute_force_estimate( m, signal_string{ { symbol_id{ w } }, 0 } );
        CHECK( single.compatible == m.chi_symbol( symbol_id{ w } ) );
        CHECK( single.predicted == m.rho_hat( symbol_id{ w }, m.chi_symbol( symbol_id{ w } ) ) );
    }
}

TEST_CASE( "time-anchored oracle differs from the window only with sourceless states" )
{
    // s0 has no predecessor: at tau = 1 it cannot be occupied.
    const finite_state_machine m( { "s0", "s1" }, { "a" },
                                  { { state_id{ 0 }, symbol_id{ 0 }, state_id{ 1 } },
                                    { state_id{ 1 }, symbol_id{ 0 }, state_id{ 1 } } } );
    CHECK( validate( m ).sourceless == std::vector< std::string >{ "s0" } );
    const auto w = m.parse( { "a" }, 1 );
    CHECK( estimate( m, w ).compatible == m.full_set() );
    CHECK( brute_force_estimate( m, w, 0 ).compatible == m.full_set() );
    CHECK( brute_force_estimate( m, w, 1 ).compatible == m.states( { "s1" } ) );
}

TEST_CASE( "estimator properties on random machines" )
{
    std::mt19937 rng( Catch::getSeed() );
    for ( int i = 0; i < 60; ++i )
    {
        const auto m = test::random_machine( rng, 6, 3 );
        for ( const auto& w : test::all_strings( m.symbol_count(), 4 ) )
        {
            const auto e = estimate( m, std::span< const symbol_id >( w ) );
            INFO( "string " << w.size() );

            // oracle
            CHECK( e == brute_force_estimate( m, signal_string{ w, 0 } ) );
            // rho = rho_hat(last, chi)
            CHECK( e.predicted == m.rho_hat( w.back(), e.compatible ) );
            if ( e.compatible.empty() )
                CHECK( e.predicted.empty() );

            // incremental equals batch on the whole string
            estimator_state< finite_state_machine > s( m );
            for ( auto x : w )
                s = s.feed( x );
            CHECK( s.compatible() == e.compatible );
            CHECK( s.predicted() == e.predicted );

            // emptiness propagates
            if ( e.compatible.empty() )
                for ( std::uint32_t x = 0; x < m.symbol_count(); ++x )
                    CHECK( s.feed( symbol_id{ x } ).compatible().empty() );

            // dropping the oldest symbol can only enlarge the estimate
            if ( w.size() > 1 )
            {
                const auto shorter = estimate( m, std::span< const symbol_id >( w ).subspan( 1 ) );
                CHECK( e.compatible.is_subset_of( shorter.compatible ) );
                CHECK( e.predicted.is_subset_of( shorter.predicted ) );
            }
        }
    }
}
