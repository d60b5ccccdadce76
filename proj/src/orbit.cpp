#include "hypflow/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace hypflow {

namespace {

constexpr double kDedupTol = 1e-9;      // entrywise, after sign choice
constexpr double kCellWidth = 1e-6;     // dedup hash quantization
constexpr double kCellMargin = 3e-3;    // fraction of a cell near a boundary
constexpr double kKeepGrace = 1e-12;    // relative, boundary-inclusive keep test

struct Rec {
  double a, b, c, d;   // raw product of the branch letters (not sign-canonical)
  double delta;        // tanh(d(p, alpha q) / 2)
  uint32_t parent;
  int8_t gen;          // letter that produced this record; -1 for the identity
  uint8_t depth8;      // word length mod 256 (full length recovered by walking)
};

inline double raw_map_distance(const Rec& r, double a, double b, double c, double d) {
  double dp = std::max({std::abs(r.a - a), std::abs(r.b - b), std::abs(r.c - c),
                        std::abs(r.d - d)});
  double dm = std::max({std::abs(r.a + a), std::abs(r.b + b), std::abs(r.c + c),
                        std::abs(r.d + d)});
  return std::min(dp, dm);
}

inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t hash_cells(const int64_t k[4]) {
  uint64_t h = 0x243f6a8885a308d3ULL;
  for (int i = 0; i < 4; ++i) h = mix64(h ^ uint64_t(k[i]));
  return h;
}

class DedupTable {
 public:
  static constexpr uint32_t kEmpty = 0xffffffffu;

  explicit DedupTable(size_t cap = 1u << 20) { slots_.assign(cap, kEmpty); }

  template <class GetRec>
  void insert(uint32_t idx, const GetRec& rec_of) {
    if ((count_ + 1) * 8 > slots_.size() * 5) grow(rec_of);
    insert_hash(slot_hash(rec_of(idx)), idx);
    ++count_;
  }

  // Returns the index of a stored record within kDedupTol of (a,b,c,d) up to
  // sign, or kEmpty. `hit_dist` receives the entrywise distance of the hit.
  template <class GetRec>
  uint32_t find(double a, double b, double c, double d, const GetRec& rec_of,
                double* hit_dist) const {
    int64_t cells[4][2];
    int ncells[4];
    for (int sign = 0; sign < 2; ++sign) {
      double e[4] = {a, b, c, d};
      if (sign) for (double& x : e) x = -x;
      for (int i = 0; i < 4; ++i) {
        double y = e[i] / kCellWidth;
        int64_t k = llround(y);
        cells[i][0] = k;
        ncells[i] = 1;
        double f = y - double(k);
        if (f > 0.5 - kCellMargin) cells[i][ncells[i]++] = k + 1;
        else if (f < -(0.5 - kCellMargin)) cells[i][ncells[i]++] = k - 1;
      }
      for (int i0 = 0; i0 < ncells[0]; ++i0)
        for (int i1 = 0; i1 < ncells[1]; ++i1)
          for (int i2 = 0; i2 < ncells[2]; ++i2)
            for (int i3 = 0; i3 < ncells[3]; ++i3) {
              int64_t key[4] = {cells[0][i0], cells[1][i1], cells[2][i2],
                                cells[3][i3]};
              uint64_t h = hash_cells(key);
              size_t pos = h & (slots_.size() - 1);
              while (slots_[pos] != kEmpty) {
                const Rec& r = rec_of(slots_[pos]);
                double dd = raw_map_distance(r, a, b, c, d);
                if (dd <= kDedupTol) {
                  *hit_dist = dd;
                  return slots_[pos];
                }
                pos = (pos + 1) & (slots_.size() - 1);
              }
            }
    }
    return kEmpty;
  }

 private:
  static uint64_t slot_hash(const Rec& r) {
    int64_t key[4] = {llround(r.a / kCellWidth), llround(r.b / kCellWidth),
                      llround(r.c / kCellWidth), llround(r.d / kCellWidth)};
    return hash_cells(key);
  }

  void insert_hash(uint64_t h, uint32_t idx) {
    size_t pos = h & (slots_.size() - 1);
    while (slots_[pos] != kEmpty) pos = (pos + 1) & (slots_.size() - 1);
    slots_[pos] = idx;
  }

  template <class GetRec>
  void grow(const GetRec& rec_of) {
    std::vector<uint32_t> old;
    old.swap(slots_);
    slots_.assign(old.size() * 2, kEmpty);
    for (uint32_t idx : old)
      if (idx != kEmpty) insert_hash(slot_hash(rec_of(idx)), idx);
  }

  std::vector<uint32_t> slots_;
  size_t count_ = 0;
};

void renorm_raw(double& a, double& b, double& c, double& d) {
  double det = a * d - b * c;
  if (!(det > 0.0))
    throw std::runtime_error("enumerate_ball: branch product lost positivity");
  double s = std::sqrt(det);
  a /= s; b /= s; c /= s; d /= s;
}

// Walk the parent chain and emit letters root-first.
size_t gather_word(const std::vector<Rec>& recs, uint32_t idx, int8_t* buf,
                   size_t cap) {
  size_t len = 0;
  while (recs[idx].gen >= 0) {
    if (len >= cap) throw std::runtime_error("enumerate_ball: word too long");
    buf[len++] = recs[idx].gen;
    idx = recs[idx].parent;
  }
  std::reverse(buf, buf + len);
  return len;
}

}  // namespace

std::string word_to_string(std::span<const int8_t> word) {
  if (word.empty()) return "e";
  std::string out;
  out.reserve(word.size());
  for (int8_t letter : word)
    out.push_back((letter & 1) ? char('A' + (letter >> 1)) : char('a' + (letter >> 1)));
  return out;
}

std::string OrbitBall::word_string(size_t i) const { return word_to_string(word_of(i)); }

size_t OrbitBall::prefix_count(double r) const {
  double thr = r * (1.0 + kKeepGrace);
  auto it = std::upper_bound(elements.begin(), elements.end(), thr,
                             [](double v, const OrbitElement& e) { return v < e.dist; });
  return size_t(it - elements.begin());
}

OrbitBall enumerate_ball(const std::vector<MobiusMap>& gens, const DiskPoint& p,
                         const DiskPoint& q, double radius, size_t max_elements,
                         WordFilter filter) {
  if (gens.empty()) throw std::invalid_argument("enumerate_ball: no generators");
  if (gens.size() > 16) throw std::invalid_argument("enumerate_ball: too many generators");
  if (!(radius > 0.0)) throw std::invalid_argument("enumerate_ball: radius must be positive");
  for (const auto& g : gens)
    if (g.is_identity())
      throw std::invalid_argument("enumerate_ball: a generator is the identity");

  const cplx zp = p.z(), zq = q.z();
  const size_t nletters = 2 * gens.size();
  std::vector<MobiusMap> letter_maps(nletters);
  for (size_t j = 0; j < gens.size(); ++j) {
    letter_maps[2 * j] = gens[j];
    letter_maps[2 * j + 1] = gens[j].inverse();
  }

  double max_disp = 0.0;
  for (const auto& g : gens) max_disp = std::max(max_disp, dist(zq, g.apply_disk(zq)));
  const double slack = 2.0 * max_disp;
  const double keep_delta = std::tanh(radius / 2.0) * (1.0 + kKeepGrace);
  const double expand_delta =
      std::max(keep_delta, std::tanh((radius + slack) / 2.0));
  const size_t max_explored = std::max<size_t>(4 * max_elements, 1u << 20);

  std::vector<Rec> recs;
  recs.reserve(1u << 16);
  DedupTable table;
  auto rec_of = [&recs](uint32_t i) -> const Rec& { return recs[i]; };

  auto delta_of = [&](double a, double b, double c, double d) {
    cplx alpha((a + d) / 2.0, (b - c) / 2.0);
    cplx beta((a - d) / 2.0, -(b + c) / 2.0);
    cplx z = (alpha * zq + beta) / (std::conj(beta) * zq + std::conj(alpha));
    return std::abs((z - zp) / (1.0 - std::conj(zp) * z));
  };

  OrbitBall ball;
  ball.base_p = zp;
  ball.base_q = zq;
  ball.radius = radius;
  ball.filter = filter;

  recs.push_back(Rec{1.0, 0.0, 0.0, 1.0, delta_of(1.0, 0.0, 0.0, 1.0), 0, -1, 0});
  table.insert(0, rec_of);
  size_t kept = recs[0].delta <= keep_delta ? 1 : 0;

  size_t level_begin = 0, level_end = 1;
  uint32_t word_len = 0;
  bool budget_hit = false;
  while (level_begin < level_end && !budget_hit) {
    ++word_len;
    for (size_t idx = level_begin; idx < level_end && !budget_hit; ++idx) {
      if (recs[idx].delta > expand_delta) continue;
      const double pa = recs[idx].a, pb = recs[idx].b, pc = recs[idx].c,
                   pd = recs[idx].d;
      for (size_t letter = 0; letter < nletters; ++letter) {
        const MobiusMap& g = letter_maps[letter];
        double a = pa * g.a + pb * g.c;
        double b = pa * g.b + pb * g.d;
        double c = pc * g.a + pd * g.c;
        double d = pc * g.b + pd * g.d;
        if ((word_len & 7u) == 0u) renorm_raw(a, b, c, d);
        double delta = delta_of(a, b, c, d);
        if (delta > expand_delta) continue;
        double hit_dist = 0.0;
        if (table.find(a, b, c, d, rec_of, &hit_dist) != DedupTable::kEmpty) {
          if (hit_dist > 1e-11) ++ball.near_collisions;
          continue;
        }
        if (recs.size() >= max_explored) { budget_hit = true; break; }
        recs.push_back(Rec{a, b, c, d, delta, uint32_t(idx), int8_t(letter),
                           uint8_t(word_len & 0xff)});
        table.insert(uint32_t(recs.size() - 1), rec_of);
        if (delta <= keep_delta) {
          ++kept;
          if (kept > max_elements) { budget_hit = true; break; }
        }
      }
    }
    level_begin = level_end;
    level_end = recs.size();
  }
  ball.complete = !budget_hit;

  // Collect, filter, and order the kept records.
  std::vector<uint32_t> keep;
  keep.reserve(kept);
  std::vector<int8_t> wbuf(512);
  for (uint32_t i = 0; i < recs.size(); ++i) {
    if (recs[i].delta > keep_delta) continue;
    if (filter == WordFilter::zero_exp_sum_gen0) {
      int64_t sum = 0;
      uint32_t j = i;
      while (recs[j].gen >= 0) {
        if (recs[j].gen == 0) ++sum;
        else if (recs[j].gen == 1) --sum;
        j = recs[j].parent;
      }
      if (sum != 0) continue;
    }
    keep.push_back(i);
  }

  std::vector<int8_t> buf1(512), buf2(512);
  auto word_less = [&](uint32_t x, uint32_t y) {
    size_t lx = gather_word(recs, x, buf1.data(), buf1.size());
    size_t ly = gather_word(recs, y, buf2.data(), buf2.size());
    if (lx != ly) return lx < ly;
    int cmp = std::memcmp(buf1.data(), buf2.data(), lx);
    if (cmp != 0) return cmp < 0;
    return x < y;
  };
  std::sort(keep.begin(), keep.end(), [&](uint32_t x, uint32_t y) {
    if (recs[x].delta != recs[y].delta) return recs[x].delta < recs[y].delta;
    return word_less(x, y);
  });

  ball.elements.reserve(keep.size());
  for (uint32_t i : keep) {
    const Rec& r = recs[i];
    OrbitElement e;
    e.map = MobiusMap::from_entries(r.a, r.b, r.c, r.d);
    e.point = e.map.apply_disk(zq);
    e.dist = 2.0 * std::atanh(std::min(r.delta, std::nextafter(1.0, 0.0)));
    size_t len = gather_word(recs, i, wbuf.data(), wbuf.size());
    e.word_begin = uint32_t(ball.word_arena.size());
    e.word_len = uint16_t(len);
    ball.word_arena.insert(ball.word_arena.end(), wbuf.data(), wbuf.data() + len);
    ball.elements.push_back(e);
  }
  return ball;
}

OrbitBall enumerate_ball(const GroupPreset& preset, const DiskPoint& p,
                         const DiskPoint& q, double radius, size_t max_elements) {
  return enumerate_ball(preset.generators, p, q, radius, max_elements, preset.filter);
}

AnnuliCounts annuli_counts(const OrbitBall& ball) {
  AnnuliCounts out;
  out.complete = ball.complete;
  size_t nbuckets = size_t(std::ceil(ball.radius - 1e-12)) + 1;
  out.a.assign(nbuckets, 0);
  for (const auto& e : ball.elements) {
    auto n = size_t(std::max(0.0, std::ceil(e.dist - 1e-12)));
    if (n >= out.a.size()) out.a.resize(n + 1, 0);
    ++out.a[n];
  }
  return out;
}

DualWitness dual_pair_witness(const OrbitBall& ball, const BoundaryPoint& xi,
                              const BoundaryPoint& eta, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("dual_pair_witness: eps must be positive");
  const cplx p = ball.base_p;
  DualWitness best;
  best.residual = 4.0 * kPi;
  for (size_t i = 0; i < ball.elements.size(); ++i) {
    const MobiusMap& m = ball.elements[i].map;
    cplx fwd = m.apply_disk(p);
    cplx bwd = m.inverse().apply_disk(p);
    cplx wf = chart_at(p, fwd), wb = chart_at(p, bwd);
    if (std::abs(wf) < 1e-9 || std::abs(wb) < 1e-9) continue;
    double r1 = angular_dist(std::arg(wb), std::arg(chart_at_boundary(p, xi.unit())));
    double r2 = angular_dist(std::arg(wf), std::arg(chart_at_boundary(p, eta.unit())));
    double res = std::max(r1, r2);
    if (res < best.residual) {
      best.residual = res;
      best.index = i;
    }
  }
  best.found = best.residual < eps;
  return best;
}

namespace {

MobiusMap rotation_quarter() {
  double s = std::sqrt(0.5);
  return MobiusMap::from_entries(s, s, -s, s);
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"cyclic_axial", "cyclic_parabolic", "modular", "schottky_perp",
          "zcover_schottky"};
}

GroupPreset make_preset(const std::string& name, const PresetParams& params) {
  GroupPreset preset;
  preset.name = name;
  if (name == "cyclic_axial") {
    if (!(params.ell > 0.0))
      throw std::invalid_argument("cyclic_axial: translation length must be positive");
    double e = std::exp(params.ell / 2.0);
    preset.generators = {MobiusMap::from_entries(e, 0.0, 0.0, 1.0 / e)};
    preset.expected_delta = 0.0;
    preset.delta_note = "elementary cyclic group: polynomial orbit growth";
    preset.elementary_hint = true;
  } else if (name == "cyclic_parabolic") {
    preset.generators = {MobiusMap::from_entries(1.0, 1.0, 0.0, 1.0)};
    preset.expected_delta = 0.5;
    preset.delta_note = "parabolic cyclic group: d(i, T^n i) ~ 2 ln n gives exponent 1/2";
    preset.elementary_hint = true;
  } else if (name == "modular") {
    preset.generators = {MobiusMap::from_entries(0.0, -1.0, 1.0, 0.0),
                         MobiusMap::from_entries(1.0, 1.0, 0.0, 1.0)};
    preset.expected_delta = 1.0;
    preset.delta_note = "lattice in the hyperbolic plane: delta = 1";
  } else if (name == "schottky_perp" || name == "zcover_schottky") {
    if (!(params.lambda > 1.0))
      throw std::invalid_argument("schottky_perp: lambda must exceed 1");
    MobiusMap A = MobiusMap::from_entries(params.lambda, 0.0, 0.0, 1.0 / params.lambda);
    MobiusMap K = rotation_quarter();
    MobiusMap B = K * A * K.inverse();
    preset.generators = {A, B};
    preset.note = "ping-pong discreteness assumed for lambda >= 3; not certified";
    if (params.lambda < 3.0)
      preset.note = "lambda < 3: ping-pong separation not assumed; results heuristic";
    if (name == "zcover_schottky") {
      preset.filter = WordFilter::zero_exp_sum_gen0;
      preset.note += "; infinite normal subgroup enumerated by filtering words to "
                     "zero exponent sum in the first generator";
    }
  } else {
    throw std::invalid_argument("unknown preset: " + name);
  }
  return preset;
}

}  // namespace hypflow
