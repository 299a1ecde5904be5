#include "towernorm/quotients.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <queue>
#include <sstream>

namespace towernorm {

namespace {

// BFS spanning tree from vertex 0, scanning incident edges by ascending
// index; deterministic.
void build_spanning_tree(std::uint32_t vertices,
                         const std::vector<LabeledEdge>& edges,
                         std::vector<std::uint32_t>& tree,
                         std::vector<std::uint32_t>& cotree) {
  std::vector<std::vector<std::uint32_t>> incident(vertices);
  for (std::uint32_t i = 0; i < edges.size(); ++i) {
    incident[edges[i].src].push_back(i);
    if (edges[i].dst != edges[i].src) incident[edges[i].dst].push_back(i);
  }
  std::vector<char> seen(vertices, 0);
  std::vector<char> in_tree(edges.size(), 0);
  std::queue<std::uint32_t> q;
  seen[0] = 1;
  q.push(0);
  std::uint32_t reached = 1;
  tree.clear();
  while (!q.empty()) {
    std::uint32_t v = q.front();
    q.pop();
    for (std::uint32_t ei : incident[v]) {
      const LabeledEdge& e = edges[ei];
      std::uint32_t other = (e.src == v) ? e.dst : e.src;
      if (!seen[other]) {
        seen[other] = 1;
        in_tree[ei] = 1;
        tree.push_back(ei);
        q.push(other);
        ++reached;
      }
    }
  }
  if (reached != vertices) throw ValidationError("graph is not connected");
  cotree.clear();
  for (std::uint32_t i = 0; i < edges.size(); ++i) {
    if (!in_tree[i]) cotree.push_back(i);
  }
}

}  // namespace

LabeledGraph::LabeledGraph(std::uint32_t vertices,
                           std::vector<LabeledEdge> edges, int n_gens)
    : vertices_(vertices), edges_(std::move(edges)), n_gens_(n_gens) {
  if (vertices_ == 0) throw ValidationError("graph needs at least one vertex");
  std::vector<std::uint32_t> out_deg(vertices_ * n_gens_, 0);
  std::vector<std::uint32_t> in_deg(vertices_ * n_gens_, 0);
  for (const LabeledEdge& e : edges_) {
    if (e.src >= vertices_ || e.dst >= vertices_ || e.label >= n_gens_) {
      throw ValidationError("edge out of range");
    }
    ++out_deg[e.src * n_gens_ + e.label];
    ++in_deg[e.dst * n_gens_ + e.label];
  }
  for (std::uint32_t v = 0; v < vertices_; ++v) {
    for (int g = 0; g < n_gens_; ++g) {
      if (out_deg[v * n_gens_ + g] != 1 || in_deg[v * n_gens_ + g] != 1) {
        throw ValidationError("label " + std::string(1, letter_name(Letter(2 * g))) +
                              " is not a permutation at vertex " + std::to_string(v));
      }
    }
  }
  build_spanning_tree(vertices_, edges_, tree_edges_, cotree_order_);
  if (tree_edges_.size() + cotree_order_.size() != edges_.size() ||
      tree_edges_.size() != vertices_ - 1) {
    throw ValidationError("spanning tree size mismatch");
  }
}

LabeledGraph ag_base() {
  std::vector<LabeledEdge> edges{{0, 0, 0}, {0, 0, 1}};
  return LabeledGraph(1, std::move(edges), 2);
}

LabeledGraph ag_cover(const LabeledGraph& g,
                      const std::vector<std::uint32_t>& unwind) {
  if (unwind.empty()) throw ValidationError("unwind set must be nonempty");
  std::vector<std::uint32_t> sorted_cotree = g.cotree_order();
  std::vector<int> bit_of(g.edges().size(), -1);
  {
    std::vector<std::uint32_t> chosen = unwind;
    std::sort(chosen.begin(), chosen.end());
    if (std::adjacent_find(chosen.begin(), chosen.end()) != chosen.end()) {
      throw ValidationError("unwind set has repeats");
    }
    // Bits follow cotree order so that partial unwinding keeps the leading
    // cotree edges' meaning stable.
    int bit = 0;
    for (std::uint32_t ei : g.cotree_order()) {
      if (std::binary_search(chosen.begin(), chosen.end(), ei)) {
        bit_of[ei] = bit++;
      }
    }
    if (bit != static_cast<int>(chosen.size())) {
      throw ValidationError("unwind edges must be cotree edges");
    }
  }
  const std::uint32_t m = static_cast<std::uint32_t>(unwind.size());
  if (m >= 31) throw ValidationError("unwind rank too large");
  const std::uint32_t fibers = 1u << m;
  std::vector<LabeledEdge> edges;
  edges.reserve(g.edges().size() * fibers);
  for (std::uint32_t ei = 0; ei < g.edges().size(); ++ei) {
    const LabeledEdge& e = g.edges()[ei];
    std::uint32_t flip = (bit_of[ei] >= 0) ? (1u << bit_of[ei]) : 0u;
    for (std::uint32_t alpha = 0; alpha < fibers; ++alpha) {
      edges.push_back({e.src * fibers + alpha, e.dst * fibers + (alpha ^ flip),
                       e.label});
    }
  }
  LabeledGraph cover(g.vertices() * fibers, std::move(edges), g.n_gens());
  cover.cover_ = CoverStructure{g.vertices(), m,
                                static_cast<std::uint32_t>(g.cotree_rank())};
  return cover;
}

FiniteQuotient::FiniteQuotient(int level,
                               std::vector<std::vector<std::uint32_t>> perms,
                               std::uint32_t basepoint)
    : level_(level), basepoint_(basepoint), perms_(std::move(perms)) {
  if (perms_.empty()) throw ValidationError("quotient needs at least one generator");
  size_ = static_cast<std::uint32_t>(perms_[0].size());
  if (size_ == 0) throw ValidationError("quotient needs at least one point");
  if (basepoint_ >= size_) throw ValidationError("basepoint out of range");
  inv_perms_.resize(perms_.size());
  for (std::size_t g = 0; g < perms_.size(); ++g) {
    if (perms_[g].size() != size_) {
      throw ValidationError("generator images have inconsistent lengths");
    }
    auto& inv = inv_perms_[g];
    inv.assign(size_, size_);
    for (std::uint32_t x = 0; x < size_; ++x) {
      std::uint32_t y = perms_[g][x];
      if (y >= size_) throw ValidationError("image out of range");
      if (inv[y] != size_) {
        throw ValidationError("generator " + std::string(1, letter_name(Letter(2 * g))) +
                              " repeats image " + std::to_string(y));
      }
      inv[y] = x;
    }
  }
  // Transitivity from the basepoint under letters and their inverses.
  std::vector<char> seen(size_, 0);
  std::queue<std::uint32_t> q;
  seen[basepoint_] = 1;
  q.push(basepoint_);
  std::uint32_t reached = 1;
  while (!q.empty()) {
    std::uint32_t x = q.front();
    q.pop();
    for (std::size_t g = 0; g < perms_.size(); ++g) {
      for (std::uint32_t y : {perms_[g][x], inv_perms_[g][x]}) {
        if (!seen[y]) {
          seen[y] = 1;
          q.push(y);
          ++reached;
        }
      }
    }
  }
  if (reached != size_) throw ValidationError("action is not transitive");
}

std::uint32_t FiniteQuotient::act_word(const Word& w, std::uint32_t x) const {
  const auto& ls = w.letters();
  for (auto it = ls.rbegin(); it != ls.rend(); ++it) x = act_letter(*it, x);
  return x;
}

FiniteQuotient graph_to_quotient(const LabeledGraph& g, int level) {
  std::vector<std::vector<std::uint32_t>> perms(
      g.n_gens(), std::vector<std::uint32_t>(g.vertices()));
  for (const LabeledEdge& e : g.edges()) perms[e.label][e.src] = e.dst;
  FiniteQuotient q(level, std::move(perms), 0);
  if (g.cover()) q.set_cover(*g.cover());
  return q;
}

TowerLink make_link(const FiniteQuotient& lower, const FiniteQuotient& upper,
                    std::vector<std::uint32_t> projection) {
  if (projection.size() != upper.size()) {
    throw ValidationError("projection length != upper size");
  }
  if (upper.size() % lower.size() != 0) {
    throw ValidationError("upper size not a multiple of lower size");
  }
  if (lower.n_gens() != upper.n_gens()) {
    throw ValidationError("generator counts differ across the link");
  }
  std::vector<std::uint32_t> fiber_count(lower.size(), 0);
  for (std::uint32_t y : projection) {
    if (y >= lower.size()) throw ValidationError("projection image out of range");
    ++fiber_count[y];
  }
  std::uint32_t fiber = upper.size() / lower.size();
  for (std::uint32_t y = 0; y < lower.size(); ++y) {
    if (fiber_count[y] != fiber) {
      throw ValidationError("fiber over " + std::to_string(y) +
                            " has size " + std::to_string(fiber_count[y]) +
                            ", expected " + std::to_string(fiber));
    }
  }
  if (projection[upper.basepoint()] != lower.basepoint()) {
    throw ValidationError("basepoint does not project to basepoint");
  }
  for (int g = 0; g < upper.n_gens(); ++g) {
    for (std::uint32_t x = 0; x < upper.size(); ++x) {
      if (projection[upper.perm(g)[x]] != lower.perm(g)[projection[x]]) {
        throw ValidationError("projection is not equivariant for generator " +
                              std::string(1, letter_name(Letter(2 * g))) +
                              " at point " + std::to_string(x));
      }
    }
  }
  return TowerLink{std::move(projection), lower.size(), upper.size(), fiber};
}

TowerLink ag_link(const FiniteQuotient& lower, const FiniteQuotient& upper) {
  if (!upper.cover()) {
    throw ValidationError("upper level carries no cover structure");
  }
  const CoverStructure& c = *upper.cover();
  if (c.base_vertices != lower.size()) {
    throw ValidationError("cover base does not match the lower level");
  }
  std::vector<std::uint32_t> projection(upper.size());
  for (std::uint32_t x = 0; x < upper.size(); ++x) projection[x] = x >> c.unwound;
  return make_link(lower, upper, std::move(projection));
}

QuotientTower::QuotientTower(std::string backend,
                             std::vector<FiniteQuotient> levels,
                             std::vector<TowerLink> links,
                             std::vector<LabeledGraph> graphs)
    : backend_(std::move(backend)),
      levels_(std::move(levels)),
      links_(std::move(links)),
      graphs_(std::move(graphs)) {
  if (levels_.empty()) throw ValidationError("tower needs at least one level");
  if (links_.size() + 1 != levels_.size()) {
    throw ValidationError("tower needs one link per consecutive level pair");
  }
}

QuotientTower build_ag_tower(int levels, const std::vector<int>& unwind_counts) {
  if (levels < 0) throw ValidationError("levels must be >= 0");
  std::vector<LabeledGraph> graphs;
  graphs.push_back(ag_base());
  std::vector<FiniteQuotient> quotients;
  quotients.push_back(graph_to_quotient(graphs[0], 0));
  std::vector<TowerLink> links;
  for (int n = 0; n < levels; ++n) {
    const LabeledGraph& g = graphs.back();
    int count = 0;  // 0 = full
    if (n < static_cast<int>(unwind_counts.size())) count = unwind_counts[n];
    std::vector<std::uint32_t> unwind;
    if (count == 0) {
      unwind = g.cotree_order();
    } else {
      if (count < 0 || count > g.cotree_rank()) {
        throw ValidationError("unwind count out of range at step " + std::to_string(n));
      }
      unwind.assign(g.cotree_order().begin(), g.cotree_order().begin() + count);
    }
    graphs.push_back(ag_cover(g, unwind));
    quotients.push_back(graph_to_quotient(graphs.back(), n + 1));
    links.push_back(ag_link(quotients[n], quotients[n + 1]));
  }
  return QuotientTower("ag", std::move(quotients), std::move(links), std::move(graphs));
}

namespace {

std::int64_t mod_reduce(std::int64_t v, std::int64_t m) {
  v %= m;
  return v < 0 ? v + m : v;
}

Mat2 mat_mod(const Mat2& g, std::int64_t m) {
  return {mod_reduce(g.a, m), mod_reduce(g.b, m), mod_reduce(g.c, m),
          mod_reduce(g.d, m)};
}

Mat2 mat_mul(const Mat2& g, const Mat2& h, std::int64_t m) {
  return {mod_reduce(g.a * h.a + g.b * h.c, m), mod_reduce(g.a * h.b + g.b * h.d, m),
          mod_reduce(g.c * h.a + g.d * h.c, m), mod_reduce(g.c * h.b + g.d * h.d, m)};
}

std::int64_t egcd(std::int64_t a, std::int64_t b, std::int64_t& x, std::int64_t& y) {
  if (b == 0) {
    x = 1;
    y = 0;
    return a;
  }
  std::int64_t x1, y1;
  std::int64_t g = egcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

Mat2 mat_inv(const Mat2& g, std::int64_t m, const char* name) {
  std::int64_t det = mod_reduce(g.a * g.d - g.b * g.c, m);
  std::int64_t x, y;
  if (egcd(det, m, x, y) != 1) {
    throw ValidationError(std::string("generator ") + name +
                          " is not invertible mod " + std::to_string(m));
  }
  std::int64_t di = mod_reduce(x, m);
  return {mod_reduce(g.d * di, m), mod_reduce(-g.b * di, m),
          mod_reduce(-g.c * di, m), mod_reduce(g.a * di, m)};
}

std::uint64_t mat_key(const Mat2& g, std::int64_t m) {
  return ((static_cast<std::uint64_t>(g.a) * m + g.b) * m + g.c) * m + g.d;
}

}  // namespace

FiniteQuotient sl2_quotient(std::int64_t modulus, const std::array<Mat2, 2>& gens,
                            int level) {
  if (modulus < 1) throw ValidationError("modulus must be >= 1");
  // Matrices are keyed by exact base-m packing into 64 bits; beyond m = 65536
  // (m^4 = 2^64) the packing would collide silently.
  if (modulus > 65536) {
    throw CapExceeded("modulus " + std::to_string(modulus) +
                      " exceeds the exact-key bound of 65536");
  }
  const std::int64_t m = modulus;
  std::array<Mat2, 2> act;
  std::array<Mat2, 2> act_inv;
  for (int g = 0; g < 2; ++g) {
    act[g] = mat_mod(gens[g], m);
    act_inv[g] = mat_inv(act[g], m, g == 0 ? "a" : "b");
  }
  std::map<std::uint64_t, std::uint32_t> index;
  std::vector<Mat2> points;
  Mat2 id = mat_mod({1, 0, 0, 1}, m);
  index[mat_key(id, m)] = 0;
  points.push_back(id);
  // BFS orbit closure under generators and inverses, discovery order.
  constexpr std::size_t kOrbitCap = 10'000'000;
  for (std::uint32_t head = 0; head < points.size(); ++head) {
    Mat2 x = points[head];
    for (int g = 0; g < 2; ++g) {
      for (const Mat2& gen : {act[g], act_inv[g]}) {
        Mat2 y = mat_mul(gen, x, m);
        std::uint64_t key = mat_key(y, m);
        if (index.emplace(key, static_cast<std::uint32_t>(points.size())).second) {
          if (points.size() >= kOrbitCap) {
            throw CapExceeded("orbit mod " + std::to_string(m) + " exceeds " +
                              std::to_string(kOrbitCap) + " points");
          }
          points.push_back(y);
        }
      }
    }
  }
  std::vector<std::vector<std::uint32_t>> perms(
      2, std::vector<std::uint32_t>(points.size()));
  for (std::uint32_t i = 0; i < points.size(); ++i) {
    for (int g = 0; g < 2; ++g) {
      perms[g][i] = index.at(mat_key(mat_mul(act[g], points[i], m), m));
    }
  }
  return FiniteQuotient(level, std::move(perms), 0);
}

QuotientTower build_sl2_tower(std::int64_t modulus_base, int levels,
                              const std::array<Mat2, 2>& gens) {
  if (modulus_base < 2) throw ValidationError("modulus base must be >= 2");
  if (levels < 0) throw ValidationError("levels must be >= 0");
  std::vector<FiniteQuotient> quotients;
  std::vector<std::vector<Mat2>> points_per_level;
  std::vector<std::int64_t> moduli;

  // Level 0 is the trivial quotient (modulus 1).
  quotients.push_back(sl2_quotient(1, gens, 0));
  points_per_level.push_back({mat_mod({1, 0, 0, 1}, 1)});
  moduli.push_back(1);

  std::int64_t m = 1;
  for (int n = 1; n <= levels; ++n) {
    if (m > (1LL << 40) / modulus_base) throw CapExceeded("modulus overflow");
    m *= modulus_base;
    moduli.push_back(m);
    FiniteQuotient q = sl2_quotient(m, gens, n);
    // Recover the point list in the same discovery order for the link.
    std::array<Mat2, 2> act{mat_mod(gens[0], m), mat_mod(gens[1], m)};
    std::array<Mat2, 2> act_inv{mat_inv(act[0], m, "a"), mat_inv(act[1], m, "b")};
    std::map<std::uint64_t, std::uint32_t> index;
    std::vector<Mat2> points;
    Mat2 id = mat_mod({1, 0, 0, 1}, m);
    index[mat_key(id, m)] = 0;
    points.push_back(id);
    for (std::uint32_t head = 0; head < points.size(); ++head) {
      Mat2 x = points[head];
      for (int g = 0; g < 2; ++g) {
        for (const Mat2& gen : {act[g], act_inv[g]}) {
          Mat2 y = mat_mul(gen, x, m);
          std::uint64_t key = mat_key(y, m);
          if (index.emplace(key, static_cast<std::uint32_t>(points.size())).second) {
            points.push_back(y);
          }
        }
      }
    }
    points_per_level.push_back(std::move(points));
    quotients.push_back(std::move(q));
  }

  std::vector<TowerLink> links;
  for (int n = 0; n < levels; ++n) {
    const auto& lower_points = points_per_level[n];
    std::int64_t lm = moduli[n];
    std::map<std::uint64_t, std::uint32_t> lower_index;
    for (std::uint32_t i = 0; i < lower_points.size(); ++i) {
      lower_index[mat_key(lower_points[i], lm)] = i;
    }
    std::vector<std::uint32_t> projection(points_per_level[n + 1].size());
    for (std::uint32_t x = 0; x < projection.size(); ++x) {
      Mat2 reduced = mat_mod(points_per_level[n + 1][x], lm);
      auto it = lower_index.find(mat_key(reduced, lm));
      if (it == lower_index.end()) {
        throw ValidationError("reduction leaves the lower orbit");
      }
      projection[x] = it->second;
    }
    links.push_back(make_link(quotients[n], quotients[n + 1], std::move(projection)));
  }
  return QuotientTower("sl2", std::move(quotients), std::move(links));
}

FiniteQuotient read_quotient(std::istream& in, int level) {
  // Text-shape failures raise ParseError at the current stream offset;
  // well-formed text with unacceptable values raises ValidationError.
  auto here = [&in]() {
    auto p = in.tellg();
    return p < 0 ? std::size_t{0} : static_cast<std::size_t>(p);
  };
  std::string tok;
  std::uint64_t nu = 0;
  std::size_t n_gens = 0;
  if (!(in >> tok) || tok != "nu" || !(in >> nu) || !(in >> tok) || tok != "gens" ||
      !(in >> n_gens)) {
    throw ParseError("malformed header: expected 'nu <N> gens <k>'", here());
  }
  if (nu == 0 || n_gens == 0 || n_gens > static_cast<std::size_t>(kMaxGenerators)) {
    throw ValidationError("unsupported size or generator count");
  }
  std::vector<std::vector<std::uint32_t>> perms(n_gens);
  for (std::size_t g = 0; g < n_gens; ++g) {
    std::string name;
    if (!(in >> name)) throw ParseError("missing generator line", here());
    std::string expected(1, static_cast<char>('a' + g));
    if (name != expected) {
      throw ParseError("expected generator '" + expected + "', got '" + name + "'",
                       here());
    }
    perms[g].resize(nu);
    for (std::uint64_t i = 0; i < nu; ++i) {
      std::int64_t img;
      if (!(in >> img)) {
        throw ParseError("missing image in generator '" + name + "'", here());
      }
      if (img < 0 || static_cast<std::uint64_t>(img) >= nu) {
        throw ValidationError("image out of range in generator '" + name + "'");
      }
      perms[g][i] = static_cast<std::uint32_t>(img);
    }
  }
  std::uint64_t basepoint = 0;
  if (in >> tok) {
    if (tok != "basepoint" || !(in >> basepoint)) {
      throw ParseError("malformed basepoint line", here());
    }
    if (basepoint >= nu) throw ValidationError("basepoint out of range");
    if (in >> tok) throw ParseError("trailing content after basepoint", here());
  }
  return FiniteQuotient(level, std::move(perms), static_cast<std::uint32_t>(basepoint));
}

FiniteQuotient load_quotient(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  return read_quotient(in);
}

void write_quotient(const FiniteQuotient& q, std::ostream& out) {
  out << "nu " << q.size() << " gens " << q.n_gens() << "\n";
  for (int g = 0; g < q.n_gens(); ++g) {
    out << static_cast<char>('a' + g);
    for (std::uint32_t x = 0; x < q.size(); ++x) out << ' ' << q.perm(g)[x];
    out << "\n";
  }
  out << "basepoint " << q.basepoint() << "\n";
}

void save_quotient(const FiniteQuotient& q, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  write_quotient(q, out);
}

bool ValidationReport::all_pass() const {
  return std::all_of(items.begin(), items.end(),
                     [](const Item& i) { return i.pass; });
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const Item& i : items) {
    os << (i.pass ? "ok   " : "FAIL ") << "level " << i.level << " " << i.check;
    if (!i.detail.empty()) os << ": " << i.detail;
    os << "\n";
  }
  return os.str();
}

ValidationReport tower_validate(const QuotientTower& tower) {
  ValidationReport report;
  auto add = [&](const std::string& check, int level, bool pass,
                 std::string detail = "") {
    report.items.push_back({check, level, pass, std::move(detail)});
  };
  for (int n = 0; n <= tower.depth(); ++n) {
    const FiniteQuotient& q = tower.level(n);
    // Construction already enforces permutations and transitivity; re-check
    // the permutation property directly from the tables.
    bool perm_ok = true;
    for (int g = 0; g < q.n_gens() && perm_ok; ++g) {
      std::vector<char> hit(q.size(), 0);
      for (std::uint32_t x = 0; x < q.size(); ++x) {
        std::uint32_t y = q.perm(g)[x];
        if (y >= q.size() || hit[y]) {
          perm_ok = false;
          break;
        }
        hit[y] = 1;
      }
    }
    add("generators act by permutations", n, perm_ok);

    std::vector<char> seen(q.size(), 0);
    std::vector<std::uint32_t> stack{q.basepoint()};
    seen[q.basepoint()] = 1;
    std::uint32_t reached = 1;
    while (!stack.empty()) {
      std::uint32_t x = stack.back();
      stack.pop_back();
      for (int g = 0; g < q.n_gens(); ++g) {
        for (std::uint32_t y : {q.perm(g)[x], q.inv_perm(g)[x]}) {
          if (!seen[y]) {
            seen[y] = 1;
            ++reached;
            stack.push_back(y);
          }
        }
      }
    }
    add("action is transitive", n, reached == q.size());
  }
  for (int n = 0; n < tower.depth(); ++n) {
    const FiniteQuotient& lo = tower.level(n);
    const FiniteQuotient& hi = tower.level(n + 1);
    bool ratio_ok = hi.size() % lo.size() == 0 && hi.size() / lo.size() >= 2;
    add("size ratio is an integer >= 2", n + 1, ratio_ok,
        std::to_string(hi.size()) + "/" + std::to_string(lo.size()));
    const TowerLink& link = tower.links()[n];
    bool link_ok = true;
    std::string detail;
    try {
      make_link(lo, hi, link.projection);
    } catch (const ValidationError& e) {
      link_ok = false;
      detail = e.what();
    }
    add("link is an equivariant surjection with equal fibers", n + 1, link_ok, detail);
  }
  return report;
}

}  // namespace towernorm
