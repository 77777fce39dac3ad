#pragma once

#include <gmpxx.h>

#include <string>

namespace chcspec {

/// Exact rational number used for every coefficient and constant.
using Rational = mpq_class;

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

}  // namespace chcspec
