#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "conjparse/model.hpp"

namespace conjparse {

/// Binary model container:
///   8 bytes  magic "CONJPRS\0"
///   u32      format version
///   u64      header length, then a JSON header (hyperparameters, labels,
///            vocabularies, pretrained word list, tensor manifest, metadata)
///   f64[]    every tensor in Parameters::tensors() order, column-major
///   u64      FNV-1a hash of all preceding bytes
/// Integers and doubles are little-endian.
inline constexpr char kModelMagic[8] = {'C', 'O', 'N', 'J', 'P', 'R', 'S', '\0'};
inline constexpr std::uint32_t kModelVersion = 1;

void save_model(std::ostream& out, const Model& m);
void save_model_file(const std::string& path, const Model& m);

/// Throws ModelFormatError on bad magic, version mismatch, truncation or a
/// checksum mismatch; never returns a partially filled model.
Model load_model(std::istream& in);
Model load_model_file(const std::string& path);

}  // namespace conjparse
