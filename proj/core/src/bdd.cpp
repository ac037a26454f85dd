#include "pec/bdd.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace pec {

namespace {

constexpr std::uint32_t kTrue = 0;
constexpr std::uint32_t kFalse = 1;
constexpr std::uint32_t kTerminalLevel = 0xffffffffu;
constexpr std::uint32_t kFreeLevel = 0xfffffffeu;

enum CacheOp : std::uint32_t { kOpNone = 0, kOpAnd, kOpXor, kOpIte, kOpRestrict };

constexpr std::size_t kInitialBuckets = std::size_t{1} << 16;
constexpr std::size_t kInitialCache = std::size_t{1} << 18;
constexpr std::size_t kMaxCache = std::size_t{1} << 22;

inline std::uint64_t mix(std::uint64_t h) noexcept {
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  h *= 0xc4ceb9fe1a85ec53ULL;
  h ^= h >> 33;
  return h;
}

inline std::uint64_t hash3(std::uint32_t a, std::uint32_t b, std::uint32_t c) noexcept {
  return mix((std::uint64_t{a} << 40) ^ (std::uint64_t{b} << 20) ^ std::uint64_t{c} ^ (std::uint64_t{b} >> 44));
}

}  // namespace

// ---------------------------------------------------------------------------
// Bdd handle

Bdd::Bdd(BddManager* manager, std::uint32_t edge) noexcept : manager_(manager), edge_(edge) {
  manager_->ref(edge_);
}

Bdd::Bdd(const Bdd& other) noexcept : manager_(other.manager_), edge_(other.edge_) {
  if (manager_) manager_->ref(edge_);
}

Bdd::Bdd(Bdd&& other) noexcept : manager_(other.manager_), edge_(other.edge_) {
  other.manager_ = nullptr;
  other.edge_ = 0;
}

Bdd& Bdd::operator=(const Bdd& other) noexcept {
  if (this != &other) {
    if (other.manager_) other.manager_->ref(other.edge_);
    if (manager_) manager_->deref(edge_);
    manager_ = other.manager_;
    edge_ = other.edge_;
  }
  return *this;
}

Bdd& Bdd::operator=(Bdd&& other) noexcept {
  if (this != &other) {
    if (manager_) manager_->deref(edge_);
    manager_ = other.manager_;
    edge_ = other.edge_;
    other.manager_ = nullptr;
    other.edge_ = 0;
  }
  return *this;
}

Bdd::~Bdd() {
  if (manager_) manager_->deref(edge_);
}

Bdd Bdd::operator~() const { return manager_->negate(*this); }
Bdd Bdd::operator&(const Bdd& other) const { return manager_->apply_and(*this, other); }
Bdd Bdd::operator|(const Bdd& other) const { return manager_->apply_or(*this, other); }
Bdd Bdd::operator^(const Bdd& other) const { return manager_->apply_xor(*this, other); }
Bdd& Bdd::operator&=(const Bdd& other) { return *this = *this & other; }
Bdd& Bdd::operator|=(const Bdd& other) { return *this = *this | other; }
Bdd& Bdd::operator^=(const Bdd& other) { return *this = *this ^ other; }

// ---------------------------------------------------------------------------
// Manager setup

BddManager::BddManager(std::uint32_t variable_count, std::vector<BddVar> order) {
  if (order.empty()) {
    order.resize(variable_count);
    std::iota(order.begin(), order.end(), BddVar{0});
  }
  if (order.size() != variable_count) {
    throw std::invalid_argument("variable order must list every variable exactly once");
  }
  level_of_var_.assign(variable_count, kTerminalLevel);
  for (std::uint32_t level = 0; level < variable_count; ++level) {
    const BddVar v = order[level];
    if (v >= variable_count || level_of_var_[v] != kTerminalLevel) {
      throw std::invalid_argument("variable order must be a permutation of the variables");
    }
    level_of_var_[v] = level;
  }
  var_at_level_ = std::move(order);

  nodes_.push_back(Node{kTerminalLevel, kTrue, kTrue, 0});
  refs_.push_back(1);  // the terminal is never reclaimed
  allocated_ = peak_ = 1;
  buckets_.assign(kInitialBuckets, 0);
  bucket_mask_ = kInitialBuckets - 1;
  cache_.assign(kInitialCache, CacheEntry{});
  cache_mask_ = kInitialCache - 1;
}

BddManager::~BddManager() = default;

std::uint32_t BddManager::level_of(BddVar v) const {
  if (v >= level_of_var_.size()) throw std::out_of_range("BDD variable out of range");
  return level_of_var_[v];
}

void BddManager::check_owner(const Bdd& f) const {
  if (f.manager_ != this) {
    throw std::invalid_argument(f.manager_ ? "BDD operands belong to different managers"
                                           : "BDD operand is empty");
  }
}

// ---------------------------------------------------------------------------
// Unique table

std::uint32_t BddManager::allocate_node() {
  if ((++alloc_tick_ & 0x3fffu) == 0 && deadline_ && std::chrono::steady_clock::now() > *deadline_) {
    throw TimeoutError("BDD operation exceeded the deadline");
  }
  if (node_limit_ != 0 && allocated_ >= node_limit_) {
    throw ResourceLimitError("BDD node limit exceeded");
  }
  std::uint32_t idx;
  if (free_head_ != 0) {
    idx = free_head_;
    free_head_ = nodes_[idx].next;
  } else {
    if (nodes_.size() >= (std::size_t{1} << 31) - 1) throw ResourceLimitError("BDD node index space exhausted");
    idx = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back(Node{});
    refs_.push_back(0);
  }
  ++allocated_;
  peak_ = std::max(peak_, allocated_);
  return idx;
}

void BddManager::rehash(std::size_t bucket_count) {
  buckets_.assign(bucket_count, 0);
  bucket_mask_ = bucket_count - 1;
  for (std::uint32_t i = 1; i < nodes_.size(); ++i) {
    Node& n = nodes_[i];
    if (n.level == kFreeLevel) continue;
    const std::size_t slot = hash3(n.level, n.lo, n.hi) & bucket_mask_;
    n.next = buckets_[slot];
    buckets_[slot] = i;
  }
}

std::uint32_t BddManager::make_node(std::uint32_t lvl, std::uint32_t lo, std::uint32_t hi) {
  if (lo == hi) return lo;
  // Canonical form: the 1-edge is never complemented.
  const std::uint32_t comp = hi & 1u;
  lo ^= comp;
  hi ^= comp;
  std::size_t slot = hash3(lvl, lo, hi) & bucket_mask_;
  for (std::uint32_t idx = buckets_[slot]; idx != 0; idx = nodes_[idx].next) {
    const Node& n = nodes_[idx];
    if (n.level == lvl && n.lo == lo && n.hi == hi) return (idx << 1) | comp;
  }
  if (allocated_ + 1 > buckets_.size()) {
    rehash(buckets_.size() * 2);
    slot = hash3(lvl, lo, hi) & bucket_mask_;
  }
  const std::uint32_t idx = allocate_node();
  nodes_[idx] = Node{lvl, lo, hi, buckets_[slot]};
  buckets_[slot] = idx;
  return (idx << 1) | comp;
}

// ---------------------------------------------------------------------------
// Computed table

std::size_t BddManager::cache_slot(std::uint32_t op, std::uint32_t a, std::uint32_t b, std::uint32_t c) const noexcept {
  return mix(hash3(a, b, c) + op * 0x9e3779b97f4a7c15ULL) & cache_mask_;
}

bool BddManager::cache_lookup(std::uint32_t op, std::uint32_t a, std::uint32_t b, std::uint32_t c,
                              std::uint32_t& out) const noexcept {
  const CacheEntry& e = cache_[cache_slot(op, a, b, c)];
  if (e.op == op && e.a == a && e.b == b && e.c == c) {
    out = e.result;
    return true;
  }
  return false;
}

void BddManager::cache_insert(std::uint32_t op, std::uint32_t a, std::uint32_t b, std::uint32_t c,
                              std::uint32_t result) noexcept {
  cache_[cache_slot(op, a, b, c)] = CacheEntry{op, a, b, c, result};
}

// ---------------------------------------------------------------------------
// Garbage collection

void BddManager::maybe_collect() {
  // Also the place where short operations notice an expired deadline.
  if (deadline_ && std::chrono::steady_clock::now() > *deadline_) {
    throw TimeoutError("BDD operation exceeded the deadline");
  }
  if (allocated_ > gc_threshold_) {
    collect_garbage();
    if (allocated_ * 2 > gc_threshold_) gc_threshold_ *= 2;
  }
}

void BddManager::collect_garbage() {
  std::vector<std::uint8_t> marked(nodes_.size(), 0);
  std::vector<std::uint32_t> stack;
  marked[0] = 1;
  for (std::uint32_t i = 1; i < nodes_.size(); ++i) {
    if (refs_[i] != 0 && !marked[i]) {
      marked[i] = 1;
      stack.push_back(i);
    }
  }
  while (!stack.empty()) {
    const std::uint32_t i = stack.back();
    stack.pop_back();
    for (const std::uint32_t child : {nodes_[i].lo >> 1, nodes_[i].hi >> 1}) {
      if (!marked[child]) {
        marked[child] = 1;
        stack.push_back(child);
      }
    }
  }

  free_head_ = 0;
  allocated_ = 1;
  for (std::uint32_t i = static_cast<std::uint32_t>(nodes_.size()) - 1; i >= 1; --i) {
    if (marked[i]) {
      ++allocated_;
    } else {
      nodes_[i].level = kFreeLevel;
      nodes_[i].next = free_head_;
      free_head_ = i;
    }
  }
  const std::size_t buckets = std::max(kInitialBuckets, std::bit_ceil(allocated_));
  rehash(buckets);

  const std::size_t cache_size = std::clamp(std::bit_ceil(allocated_), kInitialCache, kMaxCache);
  if (cache_size != cache_.size()) {
    cache_.assign(cache_size, CacheEntry{});
    cache_mask_ = cache_size - 1;
  } else {
    std::fill(cache_.begin(), cache_.end(), CacheEntry{});
  }
  ++gc_runs_;
}

// ---------------------------------------------------------------------------
// Recursive kernels (raw edges; no collection may run inside them)

std::uint32_t BddManager::and_rec(std::uint32_t f, std::uint32_t g) {
  if (f == g) return f;
  if (f == (g ^ 1u)) return kFalse;
  if (f == kTrue) return g;
  if (g == kTrue) return f;
  if (f == kFalse || g == kFalse) return kFalse;
  if (f > g) std::swap(f, g);

  std::uint32_t result;
  if (cache_lookup(kOpAnd, f, g, 0, result)) return result;

  const std::uint32_t lf = level(f);
  const std::uint32_t lg = level(g);
  const std::uint32_t top = std::min(lf, lg);
  const std::uint32_t f0 = lf == top ? low(f) : f;
  const std::uint32_t f1 = lf == top ? high(f) : f;
  const std::uint32_t g0 = lg == top ? low(g) : g;
  const std::uint32_t g1 = lg == top ? high(g) : g;

  const std::uint32_t r0 = and_rec(f0, g0);
  const std::uint32_t r1 = and_rec(f1, g1);
  result = make_node(top, r0, r1);
  cache_insert(kOpAnd, f, g, 0, result);
  return result;
}

std::uint32_t BddManager::xor_rec(std::uint32_t f, std::uint32_t g) {
  if (f == g) return kFalse;
  if (f == (g ^ 1u)) return kTrue;
  if (f == kFalse) return g;
  if (g == kFalse) return f;
  if (f == kTrue) return g ^ 1u;
  if (g == kTrue) return f ^ 1u;

  const std::uint32_t comp = (f ^ g) & 1u;
  f &= ~1u;
  g &= ~1u;
  if (f > g) std::swap(f, g);

  std::uint32_t result;
  if (cache_lookup(kOpXor, f, g, 0, result)) return result ^ comp;

  const std::uint32_t lf = level(f);
  const std::uint32_t lg = level(g);
  const std::uint32_t top = std::min(lf, lg);
  const std::uint32_t f0 = lf == top ? low(f) : f;
  const std::uint32_t f1 = lf == top ? high(f) : f;
  const std::uint32_t g0 = lg == top ? low(g) : g;
  const std::uint32_t g1 = lg == top ? high(g) : g;

  const std::uint32_t r0 = xor_rec(f0, g0);
  const std::uint32_t r1 = xor_rec(f1, g1);
  result = make_node(top, r0, r1);
  cache_insert(kOpXor, f, g, 0, result);
  return result ^ comp;
}

std::uint32_t BddManager::ite_rec(std::uint32_t f, std::uint32_t g, std::uint32_t h) {
  if (f == kTrue) return g;
  if (f == kFalse) return h;
  if (g == f) g = kTrue;
  else if (g == (f ^ 1u)) g = kFalse;
  if (h == f) h = kFalse;
  else if (h == (f ^ 1u)) h = kTrue;
  if (g == h) return g;
  if (g == kTrue && h == kFalse) return f;
  if (g == kFalse && h == kTrue) return f ^ 1u;
  if (g == kTrue) return and_rec(f ^ 1u, h ^ 1u) ^ 1u;
  if (h == kFalse) return and_rec(f, g);
  if (g == kFalse) return and_rec(f ^ 1u, h);
  if (h == kTrue) return and_rec(f, g ^ 1u) ^ 1u;
  if (g == (h ^ 1u)) return xor_rec(f, h);

  if (f & 1u) {
    f ^= 1u;
    std::swap(g, h);
  }
  std::uint32_t comp = 0;
  if (g & 1u) {
    g ^= 1u;
    h ^= 1u;
    comp = 1;
  }

  std::uint32_t result;
  if (cache_lookup(kOpIte, f, g, h, result)) return result ^ comp;

  const std::uint32_t lf = level(f);
  const std::uint32_t lg = level(g);
  const std::uint32_t lh = level(h);
  const std::uint32_t top = std::min({lf, lg, lh});
  const std::uint32_t f0 = lf == top ? low(f) : f;
  const std::uint32_t f1 = lf == top ? high(f) : f;
  const std::uint32_t g0 = lg == top ? low(g) : g;
  const std::uint32_t g1 = lg == top ? high(g) : g;
  const std::uint32_t h0 = lh == top ? low(h) : h;
  const std::uint32_t h1 = lh == top ? high(h) : h;

  const std::uint32_t r0 = ite_rec(f0, g0, h0);
  const std::uint32_t r1 = ite_rec(f1, g1, h1);
  result = make_node(top, r0, r1);
  cache_insert(kOpIte, f, g, h, result);
  return result ^ comp;
}

std::uint32_t BddManager::restrict_rec(std::uint32_t f, std::uint32_t lvl, bool value) {
  const std::uint32_t lf = level(f);
  if (lf > lvl) return f;
  const std::uint32_t comp = f & 1u;
  f &= ~1u;
  if (lf == lvl) return (value ? high(f) : low(f)) ^ comp;

  std::uint32_t result;
  if (cache_lookup(kOpRestrict, f, lvl, value, result)) return result ^ comp;
  const std::uint32_t r0 = restrict_rec(low(f), lvl, value);
  const std::uint32_t r1 = restrict_rec(high(f), lvl, value);
  result = make_node(lf, r0, r1);
  cache_insert(kOpRestrict, f, lvl, value, result);
  return result ^ comp;
}

// ---------------------------------------------------------------------------
// Public operations

Bdd BddManager::constant(bool value) { return wrap(value ? kTrue : kFalse); }

Bdd BddManager::var(BddVar v) {
  maybe_collect();
  return wrap(make_node(level_of(v), kFalse, kTrue));
}

Bdd BddManager::negate(const Bdd& f) {
  check_owner(f);
  return wrap(f.edge_ ^ 1u);
}

Bdd BddManager::apply_and(const Bdd& f, const Bdd& g) {
  check_owner(f);
  check_owner(g);
  maybe_collect();
  return wrap(and_rec(f.edge_, g.edge_));
}

Bdd BddManager::apply_or(const Bdd& f, const Bdd& g) {
  check_owner(f);
  check_owner(g);
  maybe_collect();
  return wrap(and_rec(f.edge_ ^ 1u, g.edge_ ^ 1u) ^ 1u);
}

Bdd BddManager::apply_xor(const Bdd& f, const Bdd& g) {
  check_owner(f);
  check_owner(g);
  maybe_collect();
  return wrap(xor_rec(f.edge_, g.edge_));
}

Bdd BddManager::ite(const Bdd& f, const Bdd& g, const Bdd& h) {
  check_owner(f);
  check_owner(g);
  check_owner(h);
  maybe_collect();
  return wrap(ite_rec(f.edge_, g.edge_, h.edge_));
}

Bdd BddManager::cofactor(const Bdd& f, BddVar v, bool polarity) {
  check_owner(f);
  const std::uint32_t lvl = level_of(v);
  maybe_collect();
  return wrap(restrict_rec(f.edge_, lvl, polarity));
}

Bdd BddManager::swap_variable_branches(const Bdd& f, BddVar v) {
  check_owner(f);
  const std::uint32_t lvl = level_of(v);
  maybe_collect();
  const std::uint32_t f0 = restrict_rec(f.edge_, lvl, false);
  const Bdd keep0 = wrap(f0);
  const std::uint32_t f1 = restrict_rec(f.edge_, lvl, true);
  const Bdd keep1 = wrap(f1);
  const Bdd x = var(v);
  return wrap(ite_rec(x.edge_, f0, f1));
}

Bdd BddManager::exchange_variables(const Bdd& f, BddVar a, BddVar b) {
  check_owner(f);
  if (a == b) return f;
  const Bdd xa = var(a);
  const Bdd xb = var(b);
  const Bdd fa0 = cofactor(f, a, false);
  const Bdd fa1 = cofactor(f, a, true);
  const Bdd f00 = cofactor(fa0, b, false);
  const Bdd f01 = cofactor(fa0, b, true);
  const Bdd f10 = cofactor(fa1, b, false);
  const Bdd f11 = cofactor(fa1, b, true);
  // g(a=α, b=β) = f(a=β, b=α)
  const Bdd when_a1 = ite(xb, f11, f01);
  const Bdd when_a0 = ite(xb, f10, f00);
  return ite(xa, when_a1, when_a0);
}

bool BddManager::equal(const Bdd& f, const Bdd& g) const {
  check_owner(f);
  check_owner(g);
  return f.edge_ == g.edge_;
}

bool BddManager::evaluate(const Bdd& f, const std::vector<bool>& assignment) const {
  check_owner(f);
  if (assignment.size() < var_at_level_.size()) throw std::invalid_argument("assignment too short");
  std::uint32_t e = f.edge_;
  while (level(e) != kTerminalLevel) {
    e = assignment[var_at_level_[level(e)]] ? high(e) : low(e);
  }
  return e == kTrue;
}

std::size_t BddManager::node_count(const Bdd& f) const { return node_count(std::span<const Bdd>(&f, 1)); }

std::size_t BddManager::node_count(std::span<const Bdd> roots) const {
  std::unordered_set<std::uint32_t> seen;
  std::vector<std::uint32_t> stack;
  for (const Bdd& r : roots) {
    check_owner(r);
    if (seen.insert(r.edge_ >> 1).second) stack.push_back(r.edge_ >> 1);
  }
  while (!stack.empty()) {
    const std::uint32_t i = stack.back();
    stack.pop_back();
    if (i == 0) continue;
    for (const std::uint32_t child : {nodes_[i].lo >> 1, nodes_[i].hi >> 1}) {
      if (seen.insert(child).second) stack.push_back(child);
    }
  }
  return seen.size();
}

std::string BddManager::to_dot(const Bdd& f) const {
  check_owner(f);
  std::ostringstream out;
  out << "digraph bdd {\n  node [shape=circle];\n  n0 [shape=box,label=\"1\"];\n";
  out << "  root [shape=none,label=\"\"];\n  root -> n" << (f.edge_ >> 1)
      << ((f.edge_ & 1u) ? " [arrowhead=odot]" : "") << ";\n";
  std::unordered_set<std::uint32_t> seen{f.edge_ >> 1};
  std::vector<std::uint32_t> stack{f.edge_ >> 1};
  while (!stack.empty()) {
    const std::uint32_t i = stack.back();
    stack.pop_back();
    if (i == 0) continue;
    const Node& n = nodes_[i];
    out << "  n" << i << " [label=\"v" << var_at_level_[n.level] << "\"];\n";
    out << "  n" << i << " -> n" << (n.lo >> 1) << " [style=dashed" << ((n.lo & 1u) ? ",arrowhead=odot" : "")
        << "];\n";
    out << "  n" << i << " -> n" << (n.hi >> 1) << ";\n";
    for (const std::uint32_t child : {n.lo >> 1, n.hi >> 1}) {
      if (seen.insert(child).second) stack.push_back(child);
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace pec
