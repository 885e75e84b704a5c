#pragma once

#include "aggregation.hpp"
#include "estimator.hpp"

#include <optional>
#include <vector>

namespace svest
{

template < class Set >
struct fusion_result
{
    std::vector< Set > chi;   // per distributed machine
    std::vector< Set > rho;
    Set fused_chi;
    Set fused_rho;
    std::optional< Set > monolithic_chi;
    std::optional< Set > monolithic_rho;
    std::optional< bool > exact;
};

// p distributed estimators fed with A_k(w(t)) in lockstep; their outcomes are intersected
// after all p updates of a step. The monolithic estimator exists only for comparison and is
// built on first request by replaying the observed string.
template < transition_system S >
class decentralized_estimator
{
public:
    using set_type = typename S::set_type;

private:
    const S* _parent;
    std::vector< S > _machines;
    std::vector< aggregation_function > _aggregations;
    std::vector< estimator_state< S > > _states;
    std::optional< estimator_state< S > > _monolithic;
    std::vector< symbol_id > _history;

public:
    // `machines[k]` must be the distributed machine of `parent` under `aggregations[k]`.
    decentralized_estimator( const S& parent, std::vector< S > machines, std::vector< aggregation_function > aggregations )
            : _parent{ &parent }, _machines{ std::move( machines ) }, _aggregations{ std::move( aggregations ) }
    {
        if ( _machines.empty() || _machines.size() != _aggregations.size() )
            throw error( "need one distributed machine per aggregation function" );
        for ( std::size_t k = 0; k < _machines.size(); ++k )
            if ( _aggregations[ k ].codomain_size() != _machines[ k ].symbol_count()
                 || _aggregations[ k ].domain().size() != parent.symbol_count() )
                throw alphabet_mismatch_error( "distributed machine does not match its aggregation" );
        reset();
    }

    decentralized_estimator( const decentralized_estimator& ) = delete;
    decentralized_estimator& operator=( const decentralized_estimator& ) = delete;

    void reset()
    {
        _states.clear();
        for ( const auto& m : _machines )
            _states.emplace_back( m );
        _monolithic.reset();
        _history.clear();
    }

    [[nodiscard]] std::size_t size() const { return _machines.size(); }
    [[nodiscard]] const S& machine( std::size_t k ) const { return _machines.at( k ); }
    [[nodiscard]] const aggregation_function& aggregation( std::size_t k ) const { return _aggregations.at( k ); }

    fusion_result< set_type > step( symbol_id w, bool compare = false )
    {
        check_symbol( *_parent, w );
        fusion_result< set_type > result;
        for ( std::size_t k = 0; k < _machines.size(); ++k )
        {
            _states[ k ] = _states[ k ].feed( _aggregations[ k ]( w ) );
            result.chi.push_back( _states[ k ].compatible() );
            result.rho.push_back( _states[ k ].predicted() );
        }
        result.fused_chi = result.chi.front();
        result.fused_rho = result.rho.front();
        for ( std::size_t k = 1; k < _machines.size(); ++k )
        {
            result.fused_chi = intersect( result.fused_chi, result.chi[ k ] );
            result.fused_rho = intersect( result.fused_rho, result.rho[ k ] );
        }
        _history.push_back( w );

        if ( compare || _monolithic )
        {
            if ( !_monolithic )
            {
                _monolithic.emplace( *_parent );
                for ( auto past : _history )
                    _monolithic = _monolithic->feed( past );
            }
            else
                _monolithic = _monolithic->feed( w );
        }
        if ( compare )
        {
            result.monolithic_chi = _monolithic->compatible();
            result.monolithic_rho = _monolithic->predicted();
            result.exact = result.fused_chi == *result.monolithic_chi && result.fused_rho == *result.monolithic_rho;
        }
        return result;
    }

    std::vector< fusion_result< set_type > > run_trace( std::span< const symbol_id > w, bool compare = false )
    {
        std::vector< fusion_result< set_type > > trace;
        for ( auto s : w )
            trace.push_back( step( s, compare ) );
        return trace;
    }
};

// Owns the distributed finite machines P_k built from a parent machine and a suite.
class finite_decentralized_estimator : public decentralized_estimator< finite_state_machine >
{
    static std::vector< finite_state_machine > distribute( const finite_state_machine& parent,
                                                           const aggregation_suite& suite )
    {
        std::vector< finite_state_machine > machines;
        for ( std::size_t k = 0; k < suite.size(); ++k )
            machines.push_back( build_distributed( parent, suite[ k ], k + 1 ).machine );
        return machines;
    }

public:
    finite_decentralized_estimator( const finite_state_machine& parent, const aggregation_suite& suite )
            : decentralized_estimator( parent, distribute( parent, suite ), { suite.begin(), suite.end() } ) {}
};

[[nodiscard]] inline std::vector< fusion_result< state_set > >
run_trace( finite_decentralized_estimator& est, const signal_string& w, bool compare )
{
    return est.run_trace( w.symbols, compare );
}

struct exactness_report
{
    bool exact = true;
    std::size_t strings_checked = 0;
    std::optional< signal_string > counterexample;
    std::optional< fusion_result< state_set > > mismatch;
};

// Exhaustively compares fused and monolithic window estimates on every feasible string
// of length <= max_length; stops at the first mismatch.
[[nodiscard]] inline exactness_report verify_exactness( const finite_state_machine& m, const aggregation_suite& suite,
                                                        std::size_t max_length,
                                                        std::size_t budget = enumeration_budget() )
{
    if ( suite.domain() != m.alphabet() )
        throw alphabet_mismatch_error( "suite domain differs from the machine alphabet" );
    std::vector< finite_state_machine > machines;
    for ( std::size_t k = 0; k < suite.size(); ++k )
        machines.push_back( build_distributed( m, suite[ k ], k + 1 ).machine );

    exactness_report report;
    std::vector< symbol_id > prefix;

    auto explore = [ & ]( auto& self, const estimator_state< finite_state_machine >& mono,
                          const std::vector< estimator_state< finite_state_machine > >& parts ) -> bool {
        if ( prefix.size() == max_length )
            return true;
        for ( std::uint32_t w = 0; w < m.symbol_count(); ++w )
        {
            auto next_mono = mono.feed( symbol_id{ w } );
            if ( next_mono.compatible().empty() )
                continue;
            if ( ++report.strings_checked > budget )
                throw budget_exceeded_error( report.strings_checked, budget );

            std::vector< estimator_state< finite_state_machine > > next_parts;
            fusion_result< state_set > fused;
            for ( std::size_t k = 0; k < parts.size(); ++k )
            {
                next_parts.push_back( parts[ k ].feed( suite[ k ]( symbol_id{ w } ) ) );
                fused.chi.push_back( next_parts.back().compatible() );
                fused.rho.push_back( next_parts.back().predicted() );
            }
            fused.fused_chi = fused.chi.front();
            fused.fused_rho = fused.rho.front();
            for ( std::size_t k = 1; k < parts.size(); ++k )
            {
                fused.fused_chi = intersect( fused.fused_chi, fused.chi[ k ] );
                fused.fused_rho = intersect( fused.fused_rho, fused.rho[ k ] );
            }
            fused.monolithic_chi = next_mono.compatible();
            fused.monolithic_rho = next_mono.predicted();
            fused.exact = fused.fused_chi == next_mono.compatible() && fused.fused_rho == next_mono.predicted();

            prefix.push_back( symbol_id{ w } );
            if ( !*fused.exact )
            {
                report.exact = false;
                report.counterexample = signal_string{ prefix, 0 };
                report.mismatch = std::move( fused );
                return false;
            }
            const bool ok = self( self, next_mono, next_parts );
            prefix.pop_back();
            if ( !ok )
                return false;
        }
        return true;
    };

    std::vector< estimator_state< finite_state_machine > > parts;
    for ( const auto& pm : machines )
        parts.emplace_back( pm );
    explore( explore, estimator_state< finite_state_machine >( m ), parts );
    return report;
}

} // namespace svest
