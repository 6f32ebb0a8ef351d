#include "lwlink/kat.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>

#include "lwlink/errors.hpp"
#include "lwlink/rng.hpp"

namespace lwlink::crypto {

namespace {

std::string field_hex(std::span<const std::uint8_t> data) {
  return data.empty() ? "-" : to_hex(data);
}

Bytes field_bytes(const std::string& field) {
  if (field == "-") return {};
  return from_hex(field);
}

Block16 block_from(const Bytes& b, const char* what) {
  if (b.size() != 16) {
    fail(Errc::parse_error, std::string(what) + " must be 16 bytes");
  }
  Block16 out;
  std::copy(b.begin(), b.end(), out.begin());
  return out;
}

}  // namespace

std::vector<KatRecord> load_kat_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::parse_error, "cannot open KAT file " + path);
  std::vector<KatRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string key, nonce, ad, msg, ct, tag;
    if (!(fields >> key >> nonce >> ad >> msg >> ct >> tag)) {
      fail(Errc::parse_error, "KAT line needs 6 fields: " + line);
    }
    KatRecord rec;
    rec.key = block_from(field_bytes(key), "key");
    rec.nonce = block_from(field_bytes(nonce), "nonce");
    rec.ad = field_bytes(ad);
    rec.msg = field_bytes(msg);
    rec.ct = field_bytes(ct);
    rec.tag = block_from(field_bytes(tag), "tag");
    records.push_back(std::move(rec));
  }
  return records;
}

void save_kat_file(const std::string& path,
                   const std::vector<KatRecord>& records,
                   const std::string& header_comment) {
  std::ofstream out(path);
  if (!out) fail(Errc::parse_error, "cannot write KAT file " + path);
  if (!header_comment.empty()) out << "# " << header_comment << "\n";
  out << "# fields: key nonce ad msg ct tag ('-' = empty)\n";
  for (const auto& rec : records) {
    out << field_hex(rec.key) << ' ' << field_hex(rec.nonce) << ' '
        << field_hex(rec.ad) << ' ' << field_hex(rec.msg) << ' '
        << field_hex(rec.ct) << ' ' << field_hex(rec.tag) << '\n';
  }
}

KatResult verify_kat(const std::vector<KatRecord>& records, Scheme scheme) {
  const PermutationSpec& spec = PermutationSpec::for_scheme(scheme);
  KatResult result;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const KatRecord& rec = records[i];
    ++result.total;
    AeadParams params;
    params.l_ad_blocks = (rec.ad.size() + 7) / 8;
    params.l_msg_blocks = (rec.msg.size() + 7) / 8;
    params.key = rec.key;
    params.nonce = rec.nonce;
    bool ok = true;
    try {
      auto [ct, tag] = aead_encrypt(params, rec.ad, rec.msg, spec);
      ok = ct == rec.ct && tag == rec.tag;
      if (ok) {
        auto plain = aead_decrypt(params, rec.ad, rec.ct, rec.tag, spec);
        ok = plain.has_value() && *plain == rec.msg;
      }
    } catch (const SimError&) {
      ok = false;
    }
    if (!ok) {
      ++result.failed;
      result.failed_indices.push_back(i);
    }
  }
  return result;
}

std::vector<KatRecord> generate_kat(Scheme scheme, std::uint64_t seed) {
  const PermutationSpec& spec = PermutationSpec::for_scheme(scheme);
  Xoshiro256 rng = Xoshiro256::seeded(seed);
  // Cover the degenerate tag-only case, partial blocks, and the data-phase
  // shape (two AD blocks, sixteen message blocks).
  const std::size_t ad_sizes[] = {0, 0, 3, 8, 16, 16, 5, 0, 16, 32};
  const std::size_t msg_sizes[] = {0, 1, 7, 8, 9, 64, 128, 128, 13, 100};
  std::vector<KatRecord> records;
  for (std::size_t i = 0; i < std::size(ad_sizes); ++i) {
    KatRecord rec;
    rec.key = rng.next_block16();
    rec.nonce = rng.next_block16();
    rec.ad.resize(ad_sizes[i]);
    rec.msg.resize(msg_sizes[i]);
    rng.fill(rec.ad);
    rng.fill(rec.msg);
    AeadParams params;
    params.l_ad_blocks = (rec.ad.size() + 7) / 8;
    params.l_msg_blocks = (rec.msg.size() + 7) / 8;
    params.key = rec.key;
    params.nonce = rec.nonce;
    auto [ct, tag] = aead_encrypt(params, rec.ad, rec.msg, spec);
    rec.ct = std::move(ct);
    rec.tag = tag;
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace lwlink::crypto
