#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace deltareg {

// Exact rational arithmetic for kernel construction and quadrature weights.
using rational = boost::multiprecision::cpp_rational;
using bigint = boost::multiprecision::cpp_int;

inline double to_double(const rational& r) { return r.convert_to<double>(); }

inline std::string numerator_string(const rational& r) {
    return boost::multiprecision::numerator(r).str();
}

inline std::string denominator_string(const rational& r) {
    return boost::multiprecision::denominator(r).str();
}

}  // namespace deltareg
