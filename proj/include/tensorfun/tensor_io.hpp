#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "tensorfun/tensor3.hpp"

namespace tensorfun {

/**
 * TNS3 text format.
 *
 * Dense:   first line "n1 n2 p", then p slice blocks of n1 lines with n2
 *          values each (row-major within a slice).
 * Sparse:  first line "sparse n1 n2 p nnz", then nnz lines "i j k value"
 *          with 1-based indices; unlisted entries are zero.
 *
 * Lines starting with '#' and blank lines are ignored. A value is a decimal
 * number, or "(re,im)" for complex entries. Values are written in shortest
 * round-trip form, so save/load is bit-exact for finite entries.
 */
enum class TensorFormat { dense, sparse };

Tensor3 read_tensor(std::istream& in, const std::string& source = "<stream>");
Tensor3 load_tensor(const std::filesystem::path& path);

void write_tensor(std::ostream& out, const Tensor3& t,
                  TensorFormat format = TensorFormat::dense);
void save_tensor(const std::filesystem::path& path, const Tensor3& t,
                 TensorFormat format = TensorFormat::dense);

/// Shortest representation that parses back to the same double; always
/// uses '.' as decimal point.
std::string format_double(double x);

}  // namespace tensorfun
