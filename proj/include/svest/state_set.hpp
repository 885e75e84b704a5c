#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <vector>

namespace svest
{

// Strong index types. Names live in the owning machine / alphabet.
enum class state_id : std::uint32_t {};
enum class symbol_id : std::uint32_t {};

[[nodiscard]] constexpr std::uint32_t index( state_id s ) { return static_cast< std::uint32_t >( s ); }
[[nodiscard]] constexpr std::uint32_t index( symbol_id w ) { return static_cast< std::uint32_t >( w ); }

// Sorted, duplicate-free set of states. May be empty (infeasible string).
class state_set
{
    std::vector< state_id > _members;

public:
    state_set() = default;

    state_set( std::initializer_list< state_id > members ) : _members( members ) { normalize(); }

    explicit state_set( std::vector< state_id > members ) : _members{ std::move( members ) } { normalize(); }

    static state_set all( std::uint32_t count )
    {
        state_set result;
        result._members.reserve( count );
        for ( std::uint32_t i = 0; i < count; ++i )
            result._members.push_back( state_id{ i } );
        return result;
    }

    [[nodiscard]] bool empty() const { return _members.empty(); }
    [[nodiscard]] std::size_t size() const { return _members.size(); }
    [[nodiscard]] auto begin() const { return _members.begin(); }
    [[nodiscard]] auto end() const { return _members.end(); }
    [[nodiscard]] const std::vector< state_id >& members() const { return _members; }

    [[nodiscard]] bool contains( state_id s ) const
    {
        return std::binary_search( _members.begin(), _members.end(), s );
    }

    [[nodiscard]] bool is_subset_of( const state_set& other ) const
    {
        return std::includes( other._members.begin(), other._members.end(), _members.begin(), _members.end() );
    }

    friend state_set intersect( const state_set& a, const state_set& b )
    {
        state_set result;
        std::set_intersection( a._members.begin(), a._members.end(), b._members.begin(), b._members.end(),
                               std::back_inserter( result._members ) );
        return result;
    }

    friend state_set unite( const state_set& a, const state_set& b )
    {
        state_set result;
        std::set_union( a._members.begin(), a._members.end(), b._members.begin(), b._members.end(),
                        std::back_inserter( result._members ) );
        return result;
    }

    // Element count; the n_chi contribution of a finite annotation.
    friend std::size_t annotation_size( const state_set& s ) { return s.size(); }

    friend bool operator==( const state_set&, const state_set& ) = default;
    friend auto operator<=>( const state_set&, const state_set& ) = default;

private:
    void normalize()
    {
        std::sort( _members.begin(), _members.end() );
        _members.erase( std::unique( _members.begin(), _members.end() ), _members.end() );
    }
};

} // namespace svest
