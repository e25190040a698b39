#ifndef QVOL_ERRORS_HPP
#define QVOL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qvol {

// Argument/precondition violations (bad parameter values, bad column names).
// CLI maps these to exit code 2.
class domain_error : public std::invalid_argument {
public:
    explicit domain_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// Malformed or unusable input data (files, config, series contents).
// CLI maps these to exit code 2.
class input_error : public std::runtime_error {
public:
    explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure: non-finite intermediates, quadrature that cannot reach
// its tolerance, degenerate analysis inputs. CLI maps these to exit code 3.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace qvol

#endif
