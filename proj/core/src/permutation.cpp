#include "lwlink/permutation.hpp"

#include <algorithm>
#include <vector>

#include "lwlink/errors.hpp"

namespace lwlink::crypto {

namespace {

constexpr unsigned kRounds = 12;

constexpr std::uint64_t width_mask(unsigned w) {
  return w >= 64 ? ~0ULL : ((1ULL << w) - 1);
}

constexpr std::uint64_t rotl_w(std::uint64_t x, unsigned r, unsigned w) {
  if (r == 0) return x & width_mask(w);
  return ((x << r) | (x >> (w - r))) & width_mask(w);
}

constexpr std::uint64_t round_constant(unsigned j, unsigned i, unsigned w) {
  const std::uint64_t b = (17 * j + 29 * i + 1) & 0xFF;
  std::uint64_t rc = b;
  rc |= rc << 8;
  rc |= rc << 16;
  rc |= rc << 32;
  return rc & width_mask(w);
}

struct LaneView {
  std::vector<std::uint64_t> lanes;
  std::vector<unsigned> widths;
};

LaneView load_lanes(std::span<const std::uint8_t> state, unsigned bits) {
  const unsigned n = (bits + 63) / 64;
  LaneView v;
  v.lanes.resize(n, 0);
  v.widths.resize(n, 64);
  v.widths[n - 1] = bits - 64 * (n - 1) == 0 ? 64 : bits - 64 * (n - 1);
  for (unsigned i = 0; i < n; ++i) {
    const std::size_t base = 8 * i;
    const std::size_t avail = std::min<std::size_t>(8, state.size() - base);
    std::uint64_t w = 0;
    for (std::size_t j = 0; j < avail; ++j) {
      w |= static_cast<std::uint64_t>(state[base + j]) << (8 * j);
    }
    v.lanes[i] = w & width_mask(v.widths[i]);
  }
  return v;
}

void store_lanes(const LaneView& v, std::span<std::uint8_t> state) {
  std::fill(state.begin(), state.end(), 0);
  for (std::size_t i = 0; i < v.lanes.size(); ++i) {
    const std::size_t base = 8 * i;
    const std::size_t avail = std::min<std::size_t>(8, state.size() - base);
    for (std::size_t j = 0; j < avail; ++j) {
      state[base + j] = static_cast<std::uint8_t>(v.lanes[i] >> (8 * j));
    }
  }
}

void check_width(unsigned bits) {
  if (bits != 256 && bits != 259 && bits != 320) {
    fail(Errc::unsupported_width,
         "permutation width must be 256, 259 or 320 bits, got " +
             std::to_string(bits));
  }
}

}  // namespace

void reference_permutation_in_place(std::span<std::uint8_t> state,
                                    unsigned state_bits) {
  check_width(state_bits);
  if (state.size() != (state_bits + 7) / 8) {
    fail(Errc::length_mismatch, "state buffer does not match declared width");
  }
  LaneView v = load_lanes(state, state_bits);
  const unsigned n = static_cast<unsigned>(v.lanes.size());
  for (unsigned j = 0; j < kRounds; ++j) {
    for (unsigned i = 0; i < n; ++i) {
      const unsigned w = v.widths[i];
      const unsigned rot = (7 * i + j) % w;
      std::uint64_t lane = rotl_w(v.lanes[i], rot, w);
      lane ^= v.lanes[(i + 1) % n];
      lane ^= round_constant(j, i, w);
      v.lanes[i] = lane & width_mask(w);
    }
  }
  store_lanes(v, state);
}

Bytes reference_permutation(std::span<const std::uint8_t> state,
                            unsigned state_bits) {
  check_width(state_bits);
  Bytes out(state.begin(), state.end());
  reference_permutation_in_place(out, state_bits);
  return out;
}

namespace {

PermutationSpec make_spec(const char* name, unsigned bits, unsigned d) {
  PermutationSpec spec;
  spec.name = name;
  spec.state_bits = bits;
  spec.rate_bits = 64;
  spec.rounds = kRounds;
  spec.data_limit_log2 = d;
  spec.permute = [bits](std::span<std::uint8_t> s) {
    reference_permutation_in_place(s, bits);
  };
  return spec;
}

}  // namespace

const PermutationSpec& PermutationSpec::for_scheme(Scheme s) {
  static const PermutationSpec reference = make_spec("Reference", 256, 60);
  static const PermutationSpec spix = make_spec("SPIX", 256, 60);
  static const PermutationSpec ace = make_spec("ACE", 320, 124);
  static const PermutationSpec wage = make_spec("WAGE", 259, 60);
  switch (s) {
    case Scheme::Reference: return reference;
    case Scheme::Spix: return spix;
    case Scheme::Ace: return ace;
    case Scheme::Wage: return wage;
  }
  return reference;
}

}  // namespace lwlink::crypto
