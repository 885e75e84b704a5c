#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace svest
{

class error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class unknown_symbol_error : public error
{
    std::string _symbol;

public:
    explicit unknown_symbol_error( std::string symbol )
            : error( "unknown symbol '" + symbol + "'" ), _symbol{ std::move( symbol ) } {}

    [[nodiscard]] const std::string& symbol() const { return _symbol; }
};

class unknown_state_error : public error
{
public:
    explicit unknown_state_error( const std::string& state ) : error( "unknown state '" + state + "'" ) {}
};

class invalid_machine_error : public error
{
public:
    using error::error;
};

class budget_exceeded_error : public error
{
    std::size_t _bound;

public:
    budget_exceeded_error( std::size_t bound, std::size_t budget )
            : error( "enumeration budget exceeded: bound " + std::to_string( bound ) + " > budget "
                     + std::to_string( budget ) ),
              _bound{ bound } {}

    [[nodiscard]] std::size_t bound() const { return _bound; }
};

class alphabet_mismatch_error : public error
{
public:
    using error::error;
};

// A singleton symbol whose own transitions already violate chain condition (ii).
class not_chain_decomposable_error : public error
{
    std::string _symbol;

public:
    explicit not_chain_decomposable_error( std::string symbol )
            : error( "NotChainDecomposable(" + symbol + ")" ), _symbol{ std::move( symbol ) } {}

    [[nodiscard]] const std::string& symbol() const { return _symbol; }
};

class singular_matrix_error : public error
{
public:
    singular_matrix_error() : error( "affine map is singular" ) {}
};

} // namespace svest
