#pragma once

#include "machine.hpp"

#include <concepts>
#include <span>
#include <string>

namespace svest
{

// Anything that exposes the one-step set maps needed by the recursive estimator:
// chi(w) for single symbols and the parametrized transition map rho_hat_w.
// Finite machines use state_set; the two-tank system uses rational polygons.
template < class S >
concept transition_system = requires( const S& s, symbol_id w, const typename S::set_type& x ) {
    { s.symbol_count() } -> std::convertible_to< std::size_t >;
    { s.full_set() } -> std::convertible_to< typename S::set_type >;
    { s.chi_symbol( w ) } -> std::convertible_to< typename S::set_type >;
    { s.rho_hat( w, x ) } -> std::convertible_to< typename S::set_type >;
    { intersect( x, x ) } -> std::convertible_to< typename S::set_type >;
    { x.empty() } -> std::convertible_to< bool >;
};

template < class Set >
struct estimate_pair
{
    Set compatible; // chi: states at time t
    Set predicted;  // rho: states at time t + 1

    friend bool operator==( const estimate_pair&, const estimate_pair& ) = default;
};

template < transition_system S >
void check_symbol( const S& sys, symbol_id w )
{
    if ( index( w ) >= sys.symbol_count() )
        throw unknown_symbol_error( "#" + std::to_string( index( w ) ) );
}

template < transition_system S >
[[nodiscard]] estimate_pair< typename S::set_type > estimate_step( const S& sys, const typename S::set_type& carried,
                                                                   symbol_id w )
{
    auto chi = intersect( carried, typename S::set_type( sys.chi_symbol( w ) ) );
    auto rho = typename S::set_type( sys.rho_hat( w, chi ) );
    return { std::move( chi ), std::move( rho ) };
}

// Window estimate of w|[tau,t]:
//   chi(w(tau))   = sources of w(tau)-transitions
//   chi(w|[tau,t]) = rho(w|[tau,t-1]) & chi(w(t))
//   rho(w|[tau,t]) = rho_hat_{w(t)}(chi(w|[tau,t]))
// Infeasible strings yield empty sets, never an error.
template < transition_system S >
[[nodiscard]] estimate_pair< typename S::set_type > estimate( const S& sys, std::span< const symbol_id > w )
{
    if ( w.empty() )
        throw error( "cannot estimate an empty string" );
    for ( auto s : w )
        check_symbol( sys, s );

    using set_type = typename S::set_type;
    set_type chi( sys.chi_symbol( w[ 0 ] ) );
    set_type rho( sys.rho_hat( w[ 0 ], chi ) );
    for ( std::size_t t = 1; t < w.size(); ++t )
    {
        if ( chi.empty() )
            return { set_type{}, set_type{} };
        auto next = estimate_step( sys, rho, w[ t ] );
        chi = std::move( next.compatible );
        rho = std::move( next.predicted );
    }
    return { std::move( chi ), std::move( rho ) };
}

template < transition_system S >
[[nodiscard]] auto estimate( const S& sys, const signal_string& w )
{
    return estimate( sys, std::span< const symbol_id >( w.symbols ) );
}

template < transition_system S >
[[nodiscard]] bool is_feasible( const S& sys, std::span< const symbol_id > w )
{
    return !estimate( sys, w ).compatible.empty();
}

template < transition_system S >
[[nodiscard]] bool is_feasible( const S& sys, const signal_string& w )
{
    return is_feasible( sys, std::span< const symbol_id >( w.symbols ) );
}

// Online form: carries the prediction forward, starting from the full state set.
template < transition_system S >
class estimator_state
{
public:
    using set_type = typename S::set_type;

private:
    const S* _system;
    set_type _carried;
    set_type _compatible;
    std::size_t _steps = 0;

public:
    explicit estimator_state( const S& sys ) : _system{ &sys }, _carried( sys.full_set() ), _compatible{} {}

    [[nodiscard]] const S& system() const { return *_system; }
    [[nodiscard]] const set_type& compatible() const { return _compatible; }
    [[nodiscard]] const set_type& predicted() const { return _carried; }
    [[nodiscard]] std::size_t steps() const { return _steps; }

    [[nodiscard]] estimator_state feed( symbol_id w ) const
    {
        check_symbol( *_system, w );
        estimator_state next = *this;
        auto pair = estimate_step( *_system, _carried, w );
        next._compatible = std::move( pair.compatible );
        next._carried = std::move( pair.predicted );
        ++next._steps;
        return next;
    }
};

template < transition_system S >
[[nodiscard]] estimator_state< S > estimate_incremental( const estimator_state< S >& state, symbol_id w )
{
    return state.feed( w );
}

// Definitional estimate by enumerating runs of the full behavior. With start_time > 0,
// min(start_time, horizon) unconstrained steps are prepended and runs are anchored at X0,
// giving the time-anchored semantics; horizon 0 gives the window semantics.
[[nodiscard]] inline estimate_pair< state_set > brute_force_estimate( const finite_state_machine& m,
                                                                      const signal_string& w,
                                                                      std::size_t horizon = 0,
                                                                      std::size_t budget = enumeration_budget() )
{
    if ( w.symbols.empty() )
        throw error( "cannot estimate an empty string" );
    for ( auto s : w.symbols )
        if ( index( s ) >= m.symbol_count() )
            throw unknown_symbol_error( "#" + std::to_string( index( s ) ) );

    const std::size_t prefix = std::min( w.start_time, horizon );
    const std::size_t length = prefix + w.symbols.size();

    std::vector< state_id > chi;
    std::vector< state_id > rho;
    std::size_t visited = 0;

    auto extend = [ & ]( auto& self, state_id at, state_id previous, std::size_t depth ) -> void {
        if ( depth == length )
        {
            chi.push_back( previous );
            rho.push_back( at );
            return;
        }
        for ( const auto& t : m.transitions() )
        {
            if ( t.source != at )
                continue;
            if ( depth >= prefix && t.symbol != w.symbols[ depth - prefix ] )
                continue;
            if ( ++visited > budget )
                throw budget_exceeded_error( visited, budget );
            self( self, t.target, at, depth + 1 );
        }
    };
    for ( auto x0 : m.initial() )
        extend( extend, x0, x0, 0 );

    return { state_set( std::move( chi ) ), state_set( std::move( rho ) ) };
}

} // namespace svest
