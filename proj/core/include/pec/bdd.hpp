#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pec {

using BddVar = std::uint32_t;

class BddManager;

/// Raised when a manager's deadline passes in the middle of an operation.
class TimeoutError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a configured node or size bound is exceeded.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Handle to a Boolean function owned by a BddManager.
///
/// Handles are reference counted: every live handle keeps its root (and thus
/// the whole diagram below it) alive across garbage collections. The manager
/// must outlive every handle created from it.
class Bdd {
 public:
  Bdd() noexcept = default;
  Bdd(const Bdd& other) noexcept;
  Bdd(Bdd&& other) noexcept;
  Bdd& operator=(const Bdd& other) noexcept;
  Bdd& operator=(Bdd&& other) noexcept;
  ~Bdd();

  bool valid() const noexcept { return manager_ != nullptr; }
  BddManager* manager() const noexcept { return manager_; }

  bool is_true() const noexcept { return edge_ == 0; }
  bool is_false() const noexcept { return edge_ == 1; }
  bool is_constant() const noexcept { return edge_ <= 1; }

  /// Internal edge encoding (node index << 1 | complement bit).
  std::uint32_t raw() const noexcept { return edge_; }

  Bdd operator~() const;
  Bdd operator&(const Bdd& other) const;
  Bdd operator|(const Bdd& other) const;
  Bdd operator^(const Bdd& other) const;
  Bdd& operator&=(const Bdd& other);
  Bdd& operator|=(const Bdd& other);
  Bdd& operator^=(const Bdd& other);

  friend bool operator==(const Bdd& a, const Bdd& b) noexcept {
    return a.manager_ == b.manager_ && a.edge_ == b.edge_;
  }

 private:
  friend class BddManager;
  Bdd(BddManager* manager, std::uint32_t edge) noexcept;

  BddManager* manager_ = nullptr;
  std::uint32_t edge_ = 0;
};

/// Reduced ordered BDD store with complement edges.
///
/// Nodes are hash-consed in a unique table, so two handles of one manager
/// denote the same function iff their edges are identical. Dead nodes are
/// reclaimed by a mark phase rooted at externally referenced nodes; it runs
/// only between top-level operations, once the allocated node count crosses
/// a watermark. A manager is not thread-safe.
class BddManager {
 public:
  /// `order[level]` is the variable tested at that level; empty means
  /// variable i sits at level i.
  explicit BddManager(std::uint32_t variable_count, std::vector<BddVar> order = {});
  BddManager(const BddManager&) = delete;
  BddManager& operator=(const BddManager&) = delete;
  ~BddManager();

  std::uint32_t variable_count() const noexcept { return static_cast<std::uint32_t>(var_at_level_.size()); }
  std::span<const BddVar> variable_order() const noexcept { return var_at_level_; }
  std::uint32_t level_of(BddVar v) const;

  Bdd constant(bool value);
  Bdd var(BddVar v);

  Bdd negate(const Bdd& f);
  Bdd apply_and(const Bdd& f, const Bdd& g);
  Bdd apply_or(const Bdd& f, const Bdd& g);
  Bdd apply_xor(const Bdd& f, const Bdd& g);
  Bdd ite(const Bdd& f, const Bdd& g, const Bdd& h);

  /// f with variable v fixed to `polarity`.
  Bdd cofactor(const Bdd& f, BddVar v, bool polarity);
  /// g with g|v = f|!v and g|!v = f|v.
  Bdd swap_variable_branches(const Bdd& f, BddVar v);
  /// f with the roles of variables a and b exchanged.
  Bdd exchange_variables(const Bdd& f, BddVar a, BddVar b);

  bool equal(const Bdd& f, const Bdd& g) const;

  /// `assignment` is indexed by variable id.
  bool evaluate(const Bdd& f, const std::vector<bool>& assignment) const;

  /// Number of distinct nodes reachable from the roots, terminal included.
  std::size_t node_count(const Bdd& f) const;
  std::size_t node_count(std::span<const Bdd> roots) const;

  std::string to_dot(const Bdd& f) const;

  std::size_t allocated_nodes() const noexcept { return allocated_; }
  std::size_t peak_nodes() const noexcept { return peak_; }
  std::size_t gc_runs() const noexcept { return gc_runs_; }
  void collect_garbage();

  void set_deadline(std::optional<std::chrono::steady_clock::time_point> deadline) noexcept { deadline_ = deadline; }
  /// Zero disables the bound.
  void set_node_limit(std::size_t limit) noexcept { node_limit_ = limit; }
  void set_gc_threshold(std::size_t nodes) noexcept { gc_threshold_ = nodes; }

 private:
  friend class Bdd;

  struct Node {
    std::uint32_t level;
    std::uint32_t lo;
    std::uint32_t hi;
    std::uint32_t next;
  };

  struct CacheEntry {
    std::uint32_t op;
    std::uint32_t a;
    std::uint32_t b;
    std::uint32_t c;
    std::uint32_t result;
  };

  void ref(std::uint32_t edge) noexcept { ++refs_[edge >> 1]; }
  void deref(std::uint32_t edge) noexcept { --refs_[edge >> 1]; }
  Bdd wrap(std::uint32_t edge) { return Bdd(this, edge); }
  void check_owner(const Bdd& f) const;
  void maybe_collect();

  std::uint32_t level(std::uint32_t e) const noexcept { return nodes_[e >> 1].level; }
  std::uint32_t low(std::uint32_t e) const noexcept { return nodes_[e >> 1].lo ^ (e & 1u); }
  std::uint32_t high(std::uint32_t e) const noexcept { return nodes_[e >> 1].hi ^ (e & 1u); }

  std::uint32_t make_node(std::uint32_t level, std::uint32_t lo, std::uint32_t hi);
  std::uint32_t allocate_node();
  void rehash(std::size_t bucket_count);

  bool cache_lookup(std::uint32_t op, std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t& out) const noexcept;
  void cache_insert(std::uint32_t op, std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t result) noexcept;
  std::size_t cache_slot(std::uint32_t op, std::uint32_t a, std::uint32_t b, std::uint32_t c) const noexcept;

  std::uint32_t and_rec(std::uint32_t f, std::uint32_t g);
  std::uint32_t xor_rec(std::uint32_t f, std::uint32_t g);
  std::uint32_t ite_rec(std::uint32_t f, std::uint32_t g, std::uint32_t h);
  std::uint32_t restrict_rec(std::uint32_t f, std::uint32_t level, bool value);

  std::vector<BddVar> var_at_level_;
  std::vector<std::uint32_t> level_of_var_;

  std::vector<Node> nodes_;
  std::vector<std::uint32_t> refs_;
  std::vector<std::uint32_t> buckets_;
  std::size_t bucket_mask_ = 0;
  std::uint32_t free_head_ = 0;
  std::size_t allocated_ = 0;
  std::size_t peak_ = 0;

  std::vector<CacheEntry> cache_;
  std::size_t cache_mask_ = 0;

  std::size_t gc_threshold_ = std::size_t{1} << 20;
  std::size_t gc_runs_ = 0;
  std::size_t node_limit_ = 0;
  std::optional<std::chrono::steady_clock::time_point> deadline_;
  std::uint32_t alloc_tick_ = 0;
};

}  // namespace pec
