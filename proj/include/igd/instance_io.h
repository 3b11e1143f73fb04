#ifndef IGD_INSTANCE_IO_H_
#define IGD_INSTANCE_IO_H_

#include <cstdint>
#include <istream>
#include <string>

#include "igd/problems.h"

namespace igd {

// Line-oriented instance archive. Layout:
//
//   igd-instance 1
//   class <name>
//   dimension <d>
//   components <M>
//   matrix_size <n>
//   seed <s>
//   attempts <k>
//   reference <provenance> <value|unknown> <low_confidence 0|1>
//   vector <name> <len> v1 v2 ...
//   matrix <name> <rows> <cols>
//   <row 1 entries>
//   ...
//   end
//
// Reals are written with 17 significant digits so that reading back yields
// the identical doubles. Field order per class:
//   lin:  anchor, c, a
//   sdp:  anchor, c, x_hat, c_mat, d_mat, z_mat, a[0..m)
//   soc:  anchor, c, x0_raw, d, then a[i], b[i], z[i] for each i
//   norm: anchor, c
//   exp:  anchor, c, b
//   demo: anchor, a, offset (a 1-vector), constrained_optimum
std::string serialize_instance(const GeneratedInstance& instance);

// Throws kIo on malformed text.
GeneratedInstance parse_instance(std::istream& in);
GeneratedInstance parse_instance(const std::string& text);

GeneratedInstance read_instance_file(const std::string& path);
void write_instance_file(const GeneratedInstance& instance, const std::string& path);

// FNV-1a 64-bit hash of the serialized form.
std::uint64_t instance_hash(const GeneratedInstance& instance);
std::uint64_t fnv1a64(const std::string& text);

// "%.17g".
std::string format_real(double value);

}  // namespace igd

#endif  // IGD_INSTANCE_IO_H_
