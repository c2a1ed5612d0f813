#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "vvf/raster.hpp"
#include "vvf/rng.hpp"

namespace vvf {

/// The V-tuple of discretized sets/measures evolved by the forward algorithm.
/// Level 1 is the initial state.
struct BufferState {
    std::vector<Raster> buffers;
    int level = 1;
};

/// Choices made for one output buffer: which IFS, and which input buffer
/// feeds each of its map slots.
struct BufferChoice {
    int ifs_index = 0;       // 0-based into SuperIfs::ifss
    std::vector<int> inputs;  // 0-based input buffer per map slot
};

/// One level's random choices across all V buffers.
struct TransitionRecord {
    std::vector<BufferChoice> choices;
};

/// Construction-history tree of one buffer. Nodes are shared between levels
/// (a child is a reference to an input buffer's earlier tree); the stored
/// size stays linear in steps even though the position count is exponential.
struct CodeTreeNode {
    int ifs_index = -1;  // -1 marks the level-1 leaf
    std::vector<std::shared_ptr<const CodeTreeNode>> children;
};

struct CodeTree {
    std::shared_ptr<const CodeTreeNode> root;
    int depth = 0;  // steps taken
};

/// Draws one transition: for each buffer v in ascending order, one IFS draw
/// from (P^1..P^N), then one uniform input-buffer draw per map slot in slot
/// order, with replacement. Exactly 1 + M_{n_v} RNG draws per buffer.
TransitionRecord sample_transition(const SuperIfs& s, Rng& rng);

/// Throws std::invalid_argument if rec is inconsistent with s / V.
void validate_record(const TransitionRecord& rec, const SuperIfs& s);

/// Applies one recorded transition: output buffer v is the union over map
/// slots i of f^{n_v}_i(input buffer w_{v,i}) for set rasters, or the
/// p^{n_v}_i-weighted sum of pushforwards for measure rasters.
BufferState step(const BufferState& state, const TransitionRecord& rec, const SuperIfs& s);

struct RunResult {
    BufferState final_state;
    std::vector<TransitionRecord> records;
    std::vector<CodeTree> trees;  // one per buffer
};

/// Iterates sample_transition + step k_steps times on one seeded stream.
RunResult run(const SuperIfs& s, const BufferState& initial, int k_steps, std::uint64_t seed);

/// Default initial state: V copies of the full unit square (set mode) or of
/// the uniform unit-mass measure (measure mode).
BufferState initial_state(const SuperIfs& s, int width, int height, RasterKind kind);

/// True iff every buffer used the same IFS and every input draw across all
/// buffers and slots picked the same single buffer.
bool is_neck(const TransitionRecord& rec);

/// Number of structurally distinct subtrees rooted at the given depth.
/// Cost scales with the number of shared nodes, not with the number of
/// positions.
int distinct_forms_at_depth(const CodeTree& tree, int depth);

/// One dump line, e.g. "k=1 | 1:U(L,R) | 2:U(R,R)". Input buffers are
/// labeled L/R when V = 2 and by 1-based index otherwise.
std::string format_record(const TransitionRecord& rec, const SuperIfs& s, int step_number);

/// Full dump: one line per step, each terminated by '\n'.
std::string format_record_dump(const std::vector<TransitionRecord>& records, const SuperIfs& s);

}  // namespace vvf
