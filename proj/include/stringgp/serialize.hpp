#pragma once

#include <iosfwd>

#include "stringgp/gp.hpp"
#include "stringgp/sparse_gp.hpp"

namespace stringgp {

struct SerializationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Versioned binary model files; doubles are stored raw so a
/// write/read/write cycle is byte-identical.
void save_model(const FullGPModel &model, std::ostream &out);
void save_model(const SparseGPModel &model, std::ostream &out);

FullGPModel load_full_model(std::istream &in);
SparseGPModel load_sparse_model(std::istream &in);

} // namespace stringgp
