#pragma once

#include <algorithm>
#include <functional>
#include <utility>
#include <vector>

#include "graphmill/graph.hpp"
#include "graphmill/messaging.hpp"
#include "graphmill/vertex_programs.hpp"

namespace graphmill {

// Single-threaded synchronous reference execution: each iteration computes
// all emissions from iteration k-1 states of active vertices, then all
// applies, with messages in canonical (dest, source) order. No combiners, no
// partitions. The bit-for-bit reference for all three engines.
template <class Prog>
StateVector<Prog> run_sequential(
    const Graph& g, const Prog& program, std::size_t iterations,
    const std::function<void(std::size_t, const StateVector<Prog>&, const std::vector<bool>&)>&
        observer = nullptr) {
  auto ids = g.vertex_ids();
  StateVector<Prog> states;
  states.reserve(ids.size());
  std::vector<bool> active(ids.size(), false);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    auto init = program.init(ids[i]);
    states.emplace_back(ids[i], std::move(init.state));
    active[i] = init.active;
  }
  if (observer) observer(0, states, active);

  for (std::size_t iter = 1; iter <= iterations; ++iter) {
    std::vector<Message<typename Prog::Payload>> messages;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (!(Prog::kAlwaysActive || active[i])) continue;
      program.emit(ids[i], states[i].second, g.out_edges(ids[i]),
                   [&](VertexId dest, typename Prog::Payload payload) {
                     messages.push_back({dest, ids[i], std::move(payload)});
                   });
    }
    std::sort(messages.begin(), messages.end(), MessageOrder{});

    std::vector<typename Prog::Payload> inbox;
    std::size_t cursor = 0;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      inbox.clear();
      while (cursor < messages.size() && messages[cursor].dest == ids[i])
        inbox.push_back(std::move(messages[cursor++].payload));
      if (inbox.empty() && !Prog::kAlwaysActive) {
        active[i] = false;
        continue;
      }
      auto result = program.apply(states[i].second, inbox);
      states[i].second = std::move(result.state);
      active[i] = result.activated;
    }
    if (cursor != messages.size())
      throw EngineFault("oracle: message addressed to nonexistent vertex " +
                        std::to_string(messages[cursor].dest));
    if (observer) observer(iter, states, active);
  }
  return states;
}

}  // namespace graphmill
