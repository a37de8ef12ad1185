#include "concentra/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "concentra/error.hpp"
#include "concentra/parallel.hpp"
#include "fastroots.hpp"

namespace concentra {

PrimeTable::PrimeTable(std::uint64_t limit, bool with_spf) : limit_(limit) {
  if (limit > kMaxLimit) throw Error(ErrorCode::capacity, "prime table limit exceeds 2^34");
  if (with_spf && limit > kMaxSpfLimit) throw Error(ErrorCode::capacity, "smallest-prime-factor table limit exceeds 2^28");
  bits_.assign(limit / 16 + 1, 0xff);
  bits_[0] &= 0xfe;  // 1 is not prime
  const std::uint64_t root = isqrt(limit);
  std::vector<std::uint64_t> base;
  {
    std::vector<bool> small(root + 1, true);
    for (std::uint64_t p = 3; p <= root; p += 2) {
      if (!small[p]) continue;
      base.push_back(p);
      for (std::uint64_t m = p * p; m <= root; m += 2 * p) small[m] = false;
    }
  }
  // Odd composites, one cache-sized window at a time.
  constexpr std::uint64_t kWindow = std::uint64_t{1} << 22;
  std::vector<std::uint64_t> next(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) next[i] = base[i] * base[i];
  for (std::uint64_t lo = 0; lo <= limit; lo += kWindow) {
    const std::uint64_t hi = std::min(limit, lo + kWindow - 1);
    for (std::size_t i = 0; i < base.size(); ++i) {
      const std::uint64_t step = 2 * base[i];
      std::uint64_t m = next[i];
      for (; m <= hi; m += step) bits_[m >> 4] &= static_cast<std::uint8_t>(~(1u << ((m >> 1) & 7)));
      next[i] = m;
    }
  }
  // Clear bits beyond the limit so counting stays exact.
  for (std::uint64_t n = limit + 1; n < bits_.size() * 16; ++n) {
    if (n & 1) bits_[n >> 4] &= static_cast<std::uint8_t>(~(1u << ((n >> 1) & 7)));
  }
  count_ = limit >= 2 ? 1 : 0;
  for (std::uint8_t b : bits_) count_ += static_cast<std::uint64_t>(__builtin_popcount(b));
  if (with_spf) {
    spf_.assign(limit + 1, 0);
    for (std::uint64_t n = 2; n <= limit; n += 2) spf_[n] = 2;
    for (std::uint64_t p : base) {
      for (std::uint64_t m = p * p; m <= limit; m += 2 * p)
        if (spf_[m] == 0) spf_[m] = static_cast<std::uint32_t>(p);
    }
    for (std::uint64_t n = 3; n <= limit; n += 2)
      if (spf_[n] == 0) spf_[n] = static_cast<std::uint32_t>(n);
  }
}

std::uint64_t PrimeTable::spf(std::uint64_t n) const {
  if (spf_.empty()) throw Error(ErrorCode::invalid_argument, "prime table built without smallest-prime-factor array");
  if (n < 2 || n > limit_) throw Error(ErrorCode::range, "value outside the prime table");
  return spf_[n];
}

std::vector<std::uint64_t> PrimeTable::primes(std::uint64_t lo, std::uint64_t hi) const {
  std::vector<std::uint64_t> out;
  for_each_prime(lo, hi, [&](std::uint64_t p) { out.push_back(p); });
  return out;
}

PrimeTable primes_up_to(std::uint64_t limit) { return PrimeTable(limit); }

std::vector<PrimePower> factorize_small(std::uint64_t n, const PrimeTable& table) {
  if (n < 1 || n > table.limit()) throw Error(ErrorCode::range, "value outside the smallest-prime-factor table");
  std::vector<PrimePower> out;
  while (n > 1) {
    const std::uint64_t p = table.spf(n);
    int nu = 0;
    while (n % p == 0) {
      n /= p;
      ++nu;
    }
    out.push_back({p, nu});
  }
  return out;
}

std::vector<PrimePower> FactorBlock::row(std::size_t i) const {
  std::vector<PrimePower> out;
  for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) out.push_back({primes[k], exponents[k]});
  return out;
}

std::uint64_t default_sieve_bound(const PolynomialFamily& family, std::uint64_t x, std::uint64_t y) {
  const long double top = static_cast<long double>(x) + static_cast<long double>(y);
  std::uint64_t bound = std::max<std::uint64_t>(100000, static_cast<std::uint64_t>(std::ceil(std::cbrt(top))));
  long double max_value = 0;
  for (const auto& q : family.members()) {
    long double v = 0, power = 1;
    for (int i = 0; i <= q.degree(); ++i) {
      v += std::fabs(static_cast<long double>(q.coeff(i))) * power;
      power *= top;
    }
    max_value = std::max(max_value, v);
  }
  const long double root = std::ceil(std::sqrt(max_value));
  const long double cap = std::min<long double>(root, 4.0L * static_cast<long double>(y));
  const long double limit = static_cast<long double>(std::uint64_t{1} << 32);
  if (cap > static_cast<long double>(bound)) bound = static_cast<std::uint64_t>(std::min(cap, limit));
  return bound;
}

IntervalSieve::IntervalSieve(const PolynomialFamily& family, std::uint64_t sieve_bound)
    : family_(&family), bound_(sieve_bound) {
  if (sieve_bound < 2) throw Error(ErrorCode::invalid_argument, "sieve bound must be at least 2");
  const PrimeTable table(sieve_bound);
  const auto primes = table.primes();
  constexpr std::size_t kChunk = 4096;
  const std::size_t chunks = (primes.size() + kChunk - 1) / kChunk;
  for (const auto& q : family.members()) {
    std::vector<std::vector<std::uint64_t>> chunk_roots(chunks);
    std::vector<std::vector<std::uint32_t>> chunk_counts(chunks);
    parallel_for(chunks, [&](std::size_t c) {
      const std::size_t lo = c * kChunk, hi = std::min(primes.size(), lo + kChunk);
      for (std::size_t i = lo; i < hi; ++i) {
        const std::uint64_t p = primes[i];
        const auto roots = detail::fast_roots(q, p);
        chunk_counts[c].push_back(static_cast<std::uint32_t>(roots.size()));
        chunk_roots[c].insert(chunk_roots[c].end(), roots.begin(), roots.end());
      }
    });
    RootTable rt;
    rt.offsets.push_back(0);
    for (std::size_t c = 0; c < chunks; ++c) {
      const std::size_t lo = c * kChunk;
      std::size_t pos = 0;
      for (std::size_t k = 0; k < chunk_counts[c].size(); ++k) {
        const std::uint32_t cnt = chunk_counts[c][k];
        if (cnt == 0) continue;
        rt.primes.push_back(primes[lo + k]);
        rt.roots.insert(rt.roots.end(), chunk_roots[c].begin() + static_cast<std::ptrdiff_t>(pos),
                        chunk_roots[c].begin() + static_cast<std::ptrdiff_t>(pos + cnt));
        rt.offsets.push_back(static_cast<std::uint32_t>(rt.roots.size()));
        pos += cnt;
      }
    }
    tables_.push_back(std::move(rt));
  }
}

namespace {

struct Hit {
  std::uint32_t row;
  std::uint32_t nu;
  std::uint64_t p;
};

}  // namespace

template <class U>
FactorBlock IntervalSieve::factor_block_impl(std::size_t member, std::uint64_t first, std::uint64_t count) const {
  const IntPolynomial& q = family_->member(member);
  const RootTable& rt = tables_[member];
  FactorBlock block;
  block.first = first;
  block.zero.assign(count, 0);
  std::vector<U> residual(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const i128 v = eval(q, static_cast<i128>(first + i));
    if (v == 0) {
      block.zero[i] = 1;
      residual[i] = 1;
    } else {
      residual[i] = static_cast<U>(abs_u128(v));
    }
  }
  std::vector<Hit> hits;
  hits.reserve(count * 4);
  for (std::size_t k = 0; k < rt.primes.size(); ++k) {
    const std::uint64_t p = rt.primes[k];
    const std::uint64_t shift = first % p;
    for (std::uint32_t r = rt.offsets[k]; r < rt.offsets[k + 1]; ++r) {
      std::uint64_t i = (rt.roots[r] + p - shift) % p;
      for (; i < count; i += p) {
        if (block.zero[i]) continue;
        U& value = residual[i];
        std::uint32_t nu = 0;
        while (value % p == 0) {
          value /= p;
          ++nu;
        }
        if (nu) hits.push_back({static_cast<std::uint32_t>(i), nu, p});
      }
    }
  }
  // Cofactors: above the bound, so prime when below bound^2.
  const u128 bound_sq = static_cast<u128>(bound_) * bound_;
  std::vector<std::uint32_t> row_count(count, 0);
  for (const Hit& h : hits) ++row_count[h.row];
  std::vector<std::pair<std::uint32_t, PrimePower>> extra;
  for (std::uint64_t i = 0; i < count; ++i) {
    const u128 c = residual[i];
    if (c <= 1) continue;
    if (c <= bound_sq || is_prime(c)) {
      extra.push_back({static_cast<std::uint32_t>(i), {c, 1}});
      ++row_count[i];
    } else {
      for (const auto& pp : factorize(c)) {
        extra.push_back({static_cast<std::uint32_t>(i), pp});
        ++row_count[i];
      }
    }
  }
  block.offsets.assign(count + 1, 0);
  for (std::uint64_t i = 0; i < count; ++i) block.offsets[i + 1] = block.offsets[i] + row_count[i];
  const std::size_t total = block.offsets[count];
  block.primes.resize(total);
  block.exponents.resize(total);
  std::vector<std::uint32_t> cursor(block.offsets.begin(), block.offsets.end() - 1);
  for (const Hit& h : hits) {
    const std::uint32_t at = cursor[h.row]++;
    block.primes[at] = h.p;
    block.exponents[at] = static_cast<std::uint8_t>(h.nu);
  }
  for (const auto& [row, pp] : extra) {
    const std::uint32_t at = cursor[row]++;
    block.primes[at] = pp.p;
    block.exponents[at] = static_cast<std::uint8_t>(pp.nu);
  }
  return block;
}

FactorBlock IntervalSieve::factor_block(std::size_t member, std::uint64_t first, std::uint64_t count) const {
  if (member >= family_->size()) throw Error(ErrorCode::range, "member index out of range");
  if (count == 0) {
    FactorBlock empty;
    empty.first = first;
    return empty;
  }
  if (first + count < first) throw Error(ErrorCode::overflow, "interval end exceeds 64 bits");
  const IntPolynomial& q = family_->member(member);
  // Bound |Q(n)| on the block to pick the residual width.
  long double top = static_cast<long double>(first + count), bound = 0, power = 1;
  for (int i = 0; i <= q.degree(); ++i) {
    bound += std::fabs(static_cast<long double>(q.coeff(i))) * power;
    power *= top;
  }
  if (bound < 1.8e19L) return factor_block_impl<std::uint64_t>(member, first, count);
  return factor_block_impl<u128>(member, first, count);
}

std::vector<PrimePower> IntervalFactorization::factors(std::size_t j, std::uint64_t n) const {
  if (n <= x || n - x > y) throw Error(ErrorCode::range, "n outside the factored interval");
  return members.at(j).row(n - x - 1);
}

bool IntervalFactorization::is_zero(std::size_t j, std::uint64_t n) const {
  if (n <= x || n - x > y) throw Error(ErrorCode::range, "n outside the factored interval");
  return members.at(j).zero[n - x - 1] != 0;
}

namespace {

void append_block(FactorBlock& into, const FactorBlock& part) {
  const std::uint32_t base = into.offsets.back();
  for (std::size_t i = 1; i < part.offsets.size(); ++i) into.offsets.push_back(base + part.offsets[i]);
  into.primes.insert(into.primes.end(), part.primes.begin(), part.primes.end());
  into.exponents.insert(into.exponents.end(), part.exponents.begin(), part.exponents.end());
  into.zero.insert(into.zero.end(), part.zero.begin(), part.zero.end());
}

}  // namespace

IntervalFactorization interval_factorize(const PolynomialFamily& family, std::uint64_t x, std::uint64_t y,
                                         std::uint64_t sieve_bound) {
  if (x + y < x) throw Error(ErrorCode::overflow, "interval end exceeds 64 bits");
  IntervalFactorization out;
  out.x = x;
  out.y = y;
  out.sieve_bound = sieve_bound == 0 ? default_sieve_bound(family, x, y) : sieve_bound;
  const IntervalSieve sieve(family, out.sieve_bound);
  const std::uint64_t segments = (y + kSegmentSize - 1) / kSegmentSize;
  for (std::size_t j = 0; j < family.size(); ++j) {
    std::vector<FactorBlock> parts(segments);
    parallel_for(segments, [&](std::size_t s) {
      const std::uint64_t lo = s * kSegmentSize;
      parts[s] = sieve.factor_block(j, x + 1 + lo, std::min(kSegmentSize, y - lo));
    });
    FactorBlock whole;
    whole.first = x + 1;
    for (const auto& part : parts) append_block(whole, part);
    out.members.push_back(std::move(whole));
  }
  return out;
}

FriableEntry friable_split(std::span<const std::vector<PrimePower>> member_factors, u128 threshold,
                           u128 n1_threshold) {
  std::map<u128, int> merged;
  for (const auto& list : member_factors)
    for (const auto& pp : list) merged[pp.p] += pp.nu;
  FriableEntry e;
  e.xi_infinite = true;
  u128 prod = 1;
  for (const auto& [p, nu] : merged) {
    u128 pp = 1;
    bool fits = true;
    for (int k = 0; k < nu && fits; ++k) {
      if (pp > threshold / p) fits = false;
      else pp *= p;
    }
    if (!fits || prod > threshold / pp) {
      e.xi_infinite = false;
      e.xi = p - 1;
      break;
    }
    prod *= pp;
  }
  auto friable = [&](u128 p) { return e.xi_infinite || p <= e.xi; };
  for (const auto& list : member_factors) {
    u128 a = 1;
    for (const auto& pp : list)
      if (friable(pp.p))
        for (int k = 0; k < pp.nu; ++k) a *= pp.p;
    e.a.push_back(a);
  }
  e.a_product = prod;
  bool overflow = false;
  u128 b = 1;
  for (const auto& [p, nu] : merged) {
    if (friable(p)) continue;
    if (e.p_min == 0) {
      e.p_min = p;
      e.nu_min = nu;
    }
    e.log_b += nu * std::log(static_cast<double>(p));
    for (int k = 0; k < nu && !overflow; ++k) {
      if (b > (~u128{0}) / p) overflow = true;
      else b *= p;
    }
  }
  e.b = overflow ? 0 : b;
  e.in_n1 = prod <= n1_threshold;
  return e;
}

namespace {

u128 floor_power(std::uint64_t x, double exponent) {
  const long double v = std::pow(static_cast<long double>(x), static_cast<long double>(exponent));
  const long double cap = 0x1p126L;
  if (v >= cap) return static_cast<u128>(1) << 126;
  return static_cast<u128>(std::floor(v));
}

}  // namespace

FriableDecomposition friable_decompose(const IntervalFactorization& fac, u128 threshold, u128 n1_threshold) {
  FriableDecomposition out;
  out.x = fac.x;
  out.threshold = threshold;
  out.n1_threshold = n1_threshold;
  std::vector<std::vector<PrimePower>> rows(fac.members.size());
  for (std::uint64_t i = 0; i < fac.y; ++i) {
    bool zero = false;
    for (std::size_t j = 0; j < fac.members.size(); ++j) {
      zero = zero || fac.members[j].zero[i];
      rows[j] = fac.members[j].row(i);
    }
    FriableEntry e;
    if (zero) {
      e.zero = true;
    } else {
      e = friable_split(rows, threshold, n1_threshold);
      ++(e.in_n1 ? out.n1_count : out.n2_count);
    }
    e.n = fac.x + 1 + i;
    out.entries.push_back(std::move(e));
  }
  return out;
}

FriableDecomposition friable_decompose(const IntervalFactorization& fac, std::uint64_t x, double epsilon) {
  if (!(epsilon > 0)) throw Error(ErrorCode::invalid_argument, "epsilon must be positive");
  auto out = friable_decompose(fac, floor_power(x, 2 * epsilon / 3), floor_power(x, epsilon / 3));
  out.x = x;
  out.epsilon = epsilon;
  return out;
}

std::uint64_t family_hash(const PolynomialFamily& family) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : family.to_string()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

constexpr char kMagic[4] = {'C', 'N', 'C', 'F'};

void put_u64(std::ostream& os, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(buf, 8);
}

bool get_u64(std::istream& is, std::uint64_t& v) {
  unsigned char buf[8];
  if (!is.read(reinterpret_cast<char*>(buf), 8)) return false;
  v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return true;
}

}  // namespace

void save_factorization(const std::string& path, const IntervalFactorization& fac, std::uint64_t hash) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorCode::io, "cannot write " + path);
  os.write(kMagic, 4);
  put_u64(os, kCacheVersion);
  put_u64(os, hash);
  put_u64(os, fac.x);
  put_u64(os, fac.y);
  put_u64(os, fac.sieve_bound);
  put_u64(os, fac.members.size());
  for (const auto& block : fac.members) {
    put_u64(os, block.first);
    put_u64(os, block.offsets.size());
    for (auto v : block.offsets) put_u64(os, v);
    put_u64(os, block.primes.size());
    for (u128 p : block.primes) {
      put_u64(os, static_cast<std::uint64_t>(p));
      put_u64(os, static_cast<std::uint64_t>(p >> 64));
    }
    put_u64(os, block.exponents.size());
    os.write(reinterpret_cast<const char*>(block.exponents.data()), static_cast<std::streamsize>(block.exponents.size()));
    put_u64(os, block.zero.size());
    os.write(reinterpret_cast<const char*>(block.zero.data()), static_cast<std::streamsize>(block.zero.size()));
  }
  if (!os) throw Error(ErrorCode::io, "failed writing " + path);
}

std::optional<IntervalFactorization> load_factorization(const std::string& path, std::uint64_t hash, std::uint64_t x,
                                                        std::uint64_t y, std::uint64_t sieve_bound) {
  std::ifstream is(path, std::ios::binary);
  if (!is) return std::nullopt;
  char magic[4];
  if (!is.read(magic, 4) || !std::equal(magic, magic + 4, kMagic)) return std::nullopt;
  std::uint64_t version, h, fx, fy, fb, members;
  if (!get_u64(is, version) || version != kCacheVersion) return std::nullopt;
  if (!get_u64(is, h) || !get_u64(is, fx) || !get_u64(is, fy) || !get_u64(is, fb) || !get_u64(is, members))
    return std::nullopt;
  if (h != hash || fx != x || fy != y || fb != sieve_bound || members > 64) return std::nullopt;
  IntervalFactorization out;
  out.x = x;
  out.y = y;
  out.sieve_bound = sieve_bound;
  for (std::uint64_t j = 0; j < members; ++j) {
    FactorBlock block;
    std::uint64_t len;
    if (!get_u64(is, block.first) || !get_u64(is, len) || len != y + 1) return std::nullopt;
    block.offsets.resize(len);
    for (auto& v : block.offsets) {
      std::uint64_t t;
      if (!get_u64(is, t)) return std::nullopt;
      v = static_cast<std::uint32_t>(t);
    }
    if (!get_u64(is, len) || len != block.offsets.back()) return std::nullopt;
    block.primes.resize(len);
    for (auto& p : block.primes) {
      std::uint64_t lo, hi;
      if (!get_u64(is, lo) || !get_u64(is, hi)) return std::nullopt;
      p = (static_cast<u128>(hi) << 64) | lo;
    }
    if (!get_u64(is, len) || len != block.primes.size()) return std::nullopt;
    block.exponents.resize(len);
    if (!is.read(reinterpret_cast<char*>(block.exponents.data()), static_cast<std::streamsize>(len))) return std::nullopt;
    if (!get_u64(is, len) || len != y) return std::nullopt;
    block.zero.resize(len);
    if (!is.read(reinterpret_cast<char*>(block.zero.data()), static_cast<std::streamsize>(len))) return std::nullopt;
    out.members.push_back(std::move(block));
  }
  return out;
}

}  // namespace concentra
