#pragma once

#include <gmpxx.h>

#include "json.hpp"

namespace imapk {

/// Integers go out as JSON numbers when they fit in a long, as decimal strings otherwise.
inline nlohmann::json json_int(const mpz_class& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

}  // namespace imapk
