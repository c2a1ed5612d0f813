#include "vvf/vvar.hpp"

#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace vvf {

TransitionRecord sample_transition(const SuperIfs& s, Rng& rng) {
    const int v_count = s.variability;
    const int n_ifs = s.ifs_count();
    TransitionRecord rec;
    rec.choices.resize(v_count);
    for (int v = 0; v < v_count; ++v) {
        BufferChoice& choice = rec.choices[v];
        const double u = rng.next_double();
        int n = 0;
        double acc = 0.0;
        for (; n + 1 < n_ifs; ++n) {
            acc += s.probabilities[n];
            if (u < acc) break;
        }
        choice.ifs_index = n;
        const int m_count = s.ifss[n].map_count();
        choice.inputs.resize(m_count);
        for (int i = 0; i < m_count; ++i)
            choice.inputs[i] = static_cast<int>(rng.next_index(static_cast<std::uint32_t>(v_count)));
    }
    return rec;
}

void validate_record(const TransitionRecord& rec, const SuperIfs& s) {
    if (static_cast<int>(rec.choices.size()) != s.variability)
        throw std::invalid_argument("record: expected " + std::to_string(s.variability) +
                                    " buffer choices, got " + std::to_string(rec.choices.size()));
    for (const BufferChoice& choice : rec.choices) {
        if (choice.ifs_index < 0 || choice.ifs_index >= s.ifs_count())
            throw std::invalid_argument("record: ifs index out of range");
        if (static_cast<int>(choice.inputs.size()) != s.ifss[choice.ifs_index].map_count())
            throw std::invalid_argument("record: one input buffer per map slot required");
        for (int w : choice.inputs)
            if (w < 0 || w >= s.variability)
                throw std::invalid_argument("record: input buffer index out of range");
    }
}

BufferState step(const BufferState& state, const TransitionRecord& rec, const SuperIfs& s) {
    validate_record(rec, s);
    if (static_cast<int>(state.buffers.size()) != s.variability)
        throw std::invalid_argument("state: expected V buffers");

    BufferState out;
    out.level = state.level + 1;
    out.buffers.reserve(state.buffers.size());
    for (int v = 0; v < s.variability; ++v) {
        const BufferChoice& choice = rec.choices[v];
        const Ifs& ifs = s.ifss[choice.ifs_index];
        const Raster& shape = state.buffers[0];
        Raster acc(shape.width, shape.height, shape.kind);
        for (int i = 0; i < ifs.map_count(); ++i) {
            const AffineMap& f = ifs.maps[i];
            const Raster& src = state.buffers[choice.inputs[i]];
            const double weight = ifs.weights[i];
            for (int iy = 0; iy < src.height; ++iy) {
                const double cy = src.center_y(iy);
                for (int ix = 0; ix < src.width; ++ix) {
                    const double mass = src.at(ix, iy);
                    if (mass <= 0.0) continue;
                    const double cx = src.center_x(ix);
                    const double px = f.a * cx + f.b * cy + f.e;
                    const double py = f.c * cx + f.d * cy + f.f;
                    if (acc.kind == RasterKind::set)
                        acc.mark(px, py);
                    else
                        acc.deposit(px, py, weight * mass);
                }
            }
        }
        out.buffers.push_back(std::move(acc));
    }
    return out;
}

RunResult run(const SuperIfs& s, const BufferState& initial, int k_steps, std::uint64_t seed) {
    if (k_steps < 0) throw std::invalid_argument("run: k_steps must be >= 0");
    if (static_cast<int>(initial.buffers.size()) != s.variability)
        throw std::invalid_argument("run: initial state must have V buffers");

    RunResult result;
    result.records.reserve(k_steps);
    result.final_state = initial;

    const auto leaf = std::make_shared<const CodeTreeNode>();
    std::vector<std::shared_ptr<const CodeTreeNode>> tree_roots(s.variability, leaf);

    Rng rng(seed);
    for (int k = 0; k < k_steps; ++k) {
        TransitionRecord rec = sample_transition(s, rng);
        result.final_state = step(result.final_state, rec, s);

        std::vector<std::shared_ptr<const CodeTreeNode>> next_roots(s.variability);
        for (int v = 0; v < s.variability; ++v) {
            auto node = std::make_shared<CodeTreeNode>();
            node->ifs_index = rec.choices[v].ifs_index;
            node->children.reserve(rec.choices[v].inputs.size());
            for (int w : rec.choices[v].inputs) node->children.push_back(tree_roots[w]);
            next_roots[v] = std::move(node);
        }
        tree_roots = std::move(next_roots);
        result.records.push_back(std::move(rec));
    }

    result.trees.reserve(s.variability);
    for (int v = 0; v < s.variability; ++v)
        result.trees.push_back(CodeTree{tree_roots[v], k_steps});
    return result;
}

BufferState initial_state(const SuperIfs& s, int width, int height, RasterKind kind) {
    BufferState state;
    state.level = 1;
    state.buffers.reserve(s.variability);
    for (int v = 0; v < s.variability; ++v)
        state.buffers.push_back(kind == RasterKind::set ? Raster::full_square(width, height)
                                                        : Raster::uniform_measure(width, height));
    return state;
}

bool is_neck(const TransitionRecord& rec) {
    if (rec.choices.empty()) return true;
    const int ifs0 = rec.choices[0].ifs_index;
    const int w0 = rec.choices[0].inputs.empty() ? 0 : rec.choices[0].inputs[0];
    for (const BufferChoice& choice : rec.choices) {
        if (choice.ifs_index != ifs0) return false;
        for (int w : choice.inputs)
            if (w != w0) return false;
    }
    return true;
}

int distinct_forms_at_depth(const CodeTree& tree, int depth) {
    if (!tree.root) throw std::invalid_argument("distinct_forms_at_depth: empty tree");
    if (depth < 0 || depth > tree.depth)
        throw std::invalid_argument("distinct_forms_at_depth: depth out of range");

    // Walk to the requested level, deduplicating shared nodes by pointer.
    std::vector<const CodeTreeNode*> level{tree.root.get()};
    for (int d = 0; d < depth; ++d) {
        std::vector<const CodeTreeNode*> next;
        std::unordered_set<const CodeTreeNode*> seen;
        for (const CodeTreeNode* node : level)
            for (const auto& child : node->children)
                if (seen.insert(child.get()).second) next.push_back(child.get());
        level = std::move(next);
    }

    // Distinct pointers can still denote equal trees; count by canonical
    // structural id (hash-consing, memoized per pointer).
    std::unordered_map<const CodeTreeNode*, int> memo;
    std::map<std::pair<int, std::vector<int>>, int> interned;
    const std::function<int(const CodeTreeNode*)> canon = [&](const CodeTreeNode* node) -> int {
        if (const auto it = memo.find(node); it != memo.end()) return it->second;
        std::vector<int> child_ids;
        child_ids.reserve(node->children.size());
        for (const auto& child : node->children) child_ids.push_back(canon(child.get()));
        const auto [pos, ignored] = interned.try_emplace(
            std::make_pair(node->ifs_index, std::move(child_ids)), static_cast<int>(interned.size()));
        memo.emplace(node, pos->second);
        return pos->second;
    };

    std::set<int> ids;
    for (const CodeTreeNode* node : level) ids.insert(canon(node));
    return static_cast<int>(ids.size());
}

namespace {

std::string buffer_label(int w, int v_count) {
    if (v_count == 2) return w == 0 ? "L" : "R";
    return std::to_string(w + 1);
}

}  // namespace

std::string format_record(const TransitionRecord& rec, const SuperIfs& s, int step_number) {
    std::string out = "k=" + std::to_string(step_number);
    const int v_count = static_cast<int>(rec.choices.size());
    for (int v = 0; v < v_count; ++v) {
        const BufferChoice& choice = rec.choices[v];
        out += " | " + std::to_string(v + 1) + ":" + s.ifss[choice.ifs_index].name + "(";
        for (std::size_t i = 0; i < choice.inputs.size(); ++i) {
            if (i) out += ",";
            out += buffer_label(choice.inputs[i], v_count);
        }
        out += ")";
    }
    return out;
}

std::string format_record_dump(const std::vector<TransitionRecord>& records, const SuperIfs& s) {
    std::string out;
    for (std::size_t k = 0; k < records.size(); ++k) {
        out += format_record(records[k], s, static_cast<int>(k + 1));
        out += "\n";
    }
    return out;
}

}  // namespace vvf
