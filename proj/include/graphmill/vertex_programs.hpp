#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "graphmill/errors.hpp"
#include "graphmill/graph.hpp"
#include "graphmill/serde.hpp"

namespace graphmill {

// The engine-neutral algorithm abstraction. A program provides:
//   init(v)            -> {state, active}
//   apply(state, msgs) -> {state, activated}, deterministic for a fixed
//                         message order (engines canonicalize by source id)
//   emit(v, state, out_edges, fn)  one message per outgoing edge
//   combine(a, b)      commutative/associative payload pre-aggregation
// plus wire codecs for its state and payload. Programs are pure functions of
// their inputs; engines invoke them concurrently on disjoint vertices.
template <class P>
concept VertexProgramType = requires(const P& p) {
  typename P::State;
  typename P::Payload;
  { P::kAlwaysActive } -> std::convertible_to<bool>;
  { p.state_wire_size() } -> std::convertible_to<std::size_t>;
};

template <class State>
struct Initialized {
  State state;
  bool active = false;
};

// Final per-vertex states, sorted by vertex id.
template <class Prog>
using StateVector = std::vector<std::pair<VertexId, typename Prog::State>>;

template <class State>
struct ApplyResult {
  State state;
  bool activated = false;
};

// ---------------------------------------------------------------------------
// Single-source shortest paths (unweighted hop counts).

inline constexpr std::uint64_t kInfiniteDistance = std::numeric_limits<std::uint64_t>::max();

struct SsspState {
  std::uint64_t distance = kInfiniteDistance;

  friend bool operator==(const SsspState&, const SsspState&) = default;
};

class SsspProgram {
 public:
  using State = SsspState;
  using Payload = std::uint64_t;  // candidate distance
  static constexpr bool kAlwaysActive = false;
  static constexpr std::string_view kName = "sssp";

  SsspProgram(const Graph& g, VertexId source) : source_(source) {
    if (!g.contains(source))
      throw ConfigError("sssp source vertex " + std::to_string(source) + " not in graph");
  }

  VertexId source() const { return source_; }

  Initialized<State> init(VertexId v) const {
    if (v == source_) return {State{0}, true};
    return {State{kInfiniteDistance}, false};
  }

  // New distance is the min of the old and all candidates; a vertex activates
  // only on a strictly smaller path length (ties never reactivate).
  ApplyResult<State> apply(const State& s, std::span<const Payload> messages) const {
    std::uint64_t best = s.distance;
    for (Payload m : messages) best = std::min(best, m);
    return {State{best}, best < s.distance};
  }

  template <class EmitFn>
  void emit(VertexId, const State& s, std::span<const Edge> out, EmitFn&& fn) const {
    if (s.distance == kInfiniteDistance) return;
    for (const Edge& e : out) fn(e.target, Payload{s.distance + 1});
  }

  static Payload combine(Payload a, Payload b) { return std::min(a, b); }

  std::size_t state_wire_size() const { return 8; }
  static void encode_state(BinaryWriter& w, const State& s) { w.put_u64(s.distance); }
  static State decode_state(BinaryReader& r) { return State{r.get_u64()}; }

  static std::size_t payload_wire_size(const Payload&) { return 8; }
  static void encode_payload(BinaryWriter& w, const Payload& p) { w.put_u64(p); }
  static Payload decode_payload(BinaryReader& r) { return r.get_u64(); }

 private:
  VertexId source_;
};

// ---------------------------------------------------------------------------
// Relational influence propagation: iterative weighted-mean propagation of
// label likelihoods along weighted edges.

struct RipState {
  std::vector<double> likelihood;
  bool is_seed = false;

  friend bool operator==(const RipState&, const RipState&) = default;
};

struct RipPayload {
  std::vector<double> label;
  double weight = 0.0;

  friend bool operator==(const RipPayload&, const RipPayload&) = default;
};

class RipProgram {
 public:
  using State = RipState;
  using Payload = RipPayload;
  static constexpr bool kAlwaysActive = true;
  static constexpr std::string_view kName = "rip";

  RipProgram(SeedLabelMap seeds, std::size_t num_classes, bool clamp_seeds = true)
      : seeds_(std::move(seeds)), num_classes_(num_classes), clamp_seeds_(clamp_seeds) {
    if (num_classes_ < 2) throw ConfigError("rip needs at least 2 classes");
    for (const auto& [v, label] : seeds_) {
      if (label.size() != num_classes_)
        throw ConfigError("seed label for vertex " + std::to_string(v) + " has " +
                          std::to_string(label.size()) + " components, expected " +
                          std::to_string(num_classes_));
    }
  }

  std::size_t num_classes() const { return num_classes_; }
  bool clamp_seeds() const { return clamp_seeds_; }
  const SeedLabelMap& seeds() const { return seeds_; }

  // Seeds keep their known label; everyone else starts from the uniform
  // prior. All vertices start active and emit from the first iteration.
  Initialized<State> init(VertexId v) const {
    auto it = seeds_.find(v);
    if (it != seeds_.end()) return {State{it->second, true}, true};
    return {State{std::vector<double>(num_classes_, 1.0 / static_cast<double>(num_classes_)), false},
            true};
  }

  ApplyResult<State> apply(const State& s, std::span<const Payload> messages) const {
    if (messages.empty() || (clamp_seeds_ && s.is_seed)) return {s, true};
    std::vector<double> acc(num_classes_, 0.0);
    double weight_sum = 0.0;
    for (const Payload& m : messages) {
      for (std::size_t c = 0; c < num_classes_; ++c) acc[c] += m.label[c] * m.weight;
      weight_sum += m.weight;
    }
    for (double& a : acc) a /= weight_sum;
    return {State{std::move(acc), s.is_seed}, true};
  }

  template <class EmitFn>
  void emit(VertexId, const State& s, std::span<const Edge> out, EmitFn&& fn) const {
    for (const Edge& e : out) fn(e.target, Payload{s.likelihood, e.weight});
  }

  // Running weighted mean with accumulated weight; commutative and
  // associative up to floating-point rounding.
  static Payload combine(const Payload& a, const Payload& b) {
    Payload out;
    out.weight = a.weight + b.weight;
    out.label.resize(a.label.size());
    for (std::size_t c = 0; c < a.label.size(); ++c)
      out.label[c] = (a.label[c] * a.weight + b.label[c] * b.weight) / out.weight;
    return out;
  }

  std::size_t state_wire_size() const {
    return varint_size(num_classes_) + 8 * num_classes_ + 1;
  }
  static void encode_state(BinaryWriter& w, const State& s) {
    w.put_varint(s.likelihood.size());
    for (double p : s.likelihood) w.put_f64(p);
    w.put_u8(s.is_seed ? 1 : 0);
  }
  static State decode_state(BinaryReader& r) {
    State s;
    s.likelihood.resize(r.get_varint());
    for (double& p : s.likelihood) p = r.get_f64();
    s.is_seed = r.get_u8() != 0;
    return s;
  }

  static std::size_t payload_wire_size(const Payload& p) {
    return varint_size(p.label.size()) + 8 * p.label.size() + 8;
  }
  static void encode_payload(BinaryWriter& w, const Payload& p) {
    w.put_varint(p.label.size());
    for (double x : p.label) w.put_f64(x);
    w.put_f64(p.weight);
  }
  static Payload decode_payload(BinaryReader& r) {
    Payload p;
    p.label.resize(r.get_varint());
    for (double& x : p.label) x = r.get_f64();
    p.weight = r.get_f64();
    return p;
  }

 private:
  SeedLabelMap seeds_;
  std::size_t num_classes_;
  bool clamp_seeds_;
};

}  // namespace graphmill
