#pragma once

// Text checkpoints for networks and grade stacks. Floating-point values are
// written as hexfloats so a save/load round trip is bit exact. The layout is
// described in docs/checkpoint_format.md.

#include <iosfwd>
#include <string>

#include "oscfie/mgdl_trainer.hpp"
#include "oscfie/sin_mlp.hpp"

namespace oscfie {

inline constexpr int kCheckpointVersion = 1;

void save_network(std::ostream& os, const SinMlp& net);
/// Throws std::runtime_error on a bad header, unknown version or malformed data.
SinMlp load_network(std::istream& is);

void save_stack(std::ostream& os, const GradeStack& stack);
/// Restores grades, residuals and components; node_features must be rebuilt
/// by the caller from the collocation nodes (see rebuild_node_features).
GradeStack load_stack(std::istream& is);

/// Recomputes node_features of a loaded stack at the given nodes.
void rebuild_node_features(GradeStack& stack, const std::vector<double>& nodes);

void save_network_file(const std::string& path, const SinMlp& net);
SinMlp load_network_file(const std::string& path);
void save_stack_file(const std::string& path, const GradeStack& stack);
GradeStack load_stack_file(const std::string& path);

}  // namespace oscfie
