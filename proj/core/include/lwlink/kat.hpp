#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lwlink/aead.hpp"
#include "lwlink/common.hpp"

namespace lwlink::crypto {

// AEAD test-vector records. File format: one record per line, six
// space-separated hex fields in the order key, nonce, ad, msg, ct, tag.
// Empty byte strings are written as "-". Lines starting with '#' are
// comments.
struct KatRecord {
  Block16 key{};
  Block16 nonce{};
  Bytes ad;
  Bytes msg;
  Bytes ct;
  Block16 tag{};
};

std::vector<KatRecord> load_kat_file(const std::string& path);
void save_kat_file(const std::string& path,
                   const std::vector<KatRecord>& records,
                   const std::string& header_comment);

struct KatResult {
  std::size_t total = 0;
  std::size_t failed = 0;
  std::vector<std::size_t> failed_indices;
};

// Re-encrypts and re-decrypts every record under the given suite and checks
// ciphertext, tag and roundtrip.
KatResult verify_kat(const std::vector<KatRecord>& records, Scheme scheme);

// Deterministically builds a vector set covering empty, partial-block and
// multi-block AD/message shapes.
std::vector<KatRecord> generate_kat(Scheme scheme, std::uint64_t seed);

}  // namespace lwlink::crypto
