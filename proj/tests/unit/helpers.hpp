#pragma once

#include <random>
#include <string>

#include "affdbg/affine.hpp"

namespace testutil {

inline affdbg::RootDatum datum(const std::string& type, const std::string& lattice = "adjoint") {
  return affdbg::RootDatum::load_json({{"type", {type}}, {"lattice", lattice}});
}

inline affdbg::RootDatum data_file(const std::string& name) {
  return affdbg::RootDatum::load_file(std::string(AFFDBG_DATA_DIR) + "/" + name);
}

inline affdbg::AffineElement random_x(const affdbg::RootDatum& d, std::mt19937_64& rng, long long range) {
  affdbg::AffineElement x{static_cast<affdbg::WIdx>(rng() % d.W_size()), d.zero()};
  for (int i = 0; i < d.rank(); ++i) x.mu[i] = static_cast<long long>(rng() % (2 * range + 1)) - range;
  return x;
}

}  // namespace testutil
