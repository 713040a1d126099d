#pragma once

// Ready-made handler packs so architectures can be simulated without
// writing any operator code.

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "scc/sim.hpp"

namespace scc {

struct PackOptions {
  /// Whether a Maybe-emission activation publishes. When empty, a coin
  /// seeded with `seed` decides.
  std::function<bool(const std::string& op, std::size_t contract)> publish_decision;
  std::uint64_t seed = 0;
};

/// Binds every unbound method to a handler that threads the data of the
/// last value it has seen through each pull and into its result, and gives
/// every sensor source without a responder one that echoes its arguments.
/// A pull contract without requirements answers with the operator's latest
/// value when it has one.
void install_pass_through(Simulator& sim, const PackOptions& options = {});

/// Table-backed name and directory lookups plus intrusion detection for
/// the web server example; everything else is pass-through.
void install_webserver(Simulator& sim, const PackOptions& options = {});

std::vector<std::string> handler_pack_names();
/// Throws scc::Error for an unknown pack name.
void install_pack(Simulator& sim, std::string_view name, const PackOptions& options = {});

}  // namespace scc
