#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "samgp/rng.hpp"

namespace samgp {

enum class Op : std::uint8_t { Add, Sub, Mul, Div, Sin, Cos, Tanh, Square, Reciprocal, Sqrt, Exp, Log };

inline constexpr std::size_t kFunctionCount = 12;
inline constexpr Op kAllOps[kFunctionCount] = {Op::Add, Op::Sub,  Op::Mul,    Op::Div,        Op::Sin,  Op::Cos,
                                               Op::Tanh, Op::Square, Op::Reciprocal, Op::Sqrt, Op::Exp, Op::Log};

[[nodiscard]] constexpr int arity(Op op) noexcept
{
    switch (op) {
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
        return 2;
    default:
        return 1;
    }
}

[[nodiscard]] std::string_view symbol(Op op) noexcept;

enum class NodeType : std::uint8_t { Function, Feature, Constant };

struct Node {
    NodeType type{NodeType::Constant};
    Op op{Op::Add};
    std::uint32_t feature{0};
    double value{0.0};

    [[nodiscard]] static Node function(Op o) noexcept { return {NodeType::Function, o, 0, 0.0}; }
    [[nodiscard]] static Node feature_ref(std::uint32_t index) noexcept { return {NodeType::Feature, Op::Add, index, 0.0}; }
    [[nodiscard]] static Node constant(double v) noexcept { return {NodeType::Constant, Op::Add, 0, v}; }

    [[nodiscard]] bool is_function() const noexcept { return type == NodeType::Function; }
    [[nodiscard]] bool is_terminal() const noexcept { return type != NodeType::Function; }
    [[nodiscard]] int arity() const noexcept { return is_function() ? samgp::arity(op) : 0; }

    // Identity compares only the fields meaningful for the node type.
    friend bool operator==(const Node& a, const Node& b) noexcept;
};

// Immutable expression tree stored in prefix order. Every node carries the length of the
// subtree it roots, so subtree i spans nodes [i, i + subtree_size(i)).
class ExprTree {
public:
    // Throws StructuralError when the node sequence is not a single well-formed prefix tree.
    explicit ExprTree(std::vector<Node> prefix);

    [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }
    [[nodiscard]] std::size_t depth() const noexcept { return depth_; }
    [[nodiscard]] std::span<const Node> nodes() const noexcept { return nodes_; }
    [[nodiscard]] const Node& node(std::size_t i) const { return nodes_[i]; }
    [[nodiscard]] std::size_t subtree_size(std::size_t i) const { return lengths_[i]; }

    // Prefix indices of the children of node i, left to right.
    [[nodiscard]] std::vector<std::size_t> children(std::size_t i) const;

    [[nodiscard]] ExprTree subtree(std::size_t i) const;
    [[nodiscard]] ExprTree replace_subtree(std::size_t i, const ExprTree& replacement) const;

    [[nodiscard]] std::size_t function_count() const noexcept;
    [[nodiscard]] std::size_t constant_count() const noexcept;
    // 1 + largest feature index referenced, 0 when the tree has no feature terminals.
    [[nodiscard]] std::size_t required_features() const noexcept;

    // Parenthesized prefix form, e.g. "(add (mul x0 0.5) (sin x1))". Constants use the
    // shortest representation that round-trips.
    [[nodiscard]] std::string to_string() const;
    [[nodiscard]] static ExprTree parse(std::string_view text);

    friend bool operator==(const ExprTree& a, const ExprTree& b) noexcept { return a.nodes_ == b.nodes_; }

private:
    std::vector<Node> nodes_;
    std::vector<std::uint32_t> lengths_;
    std::size_t depth_{0};
};

struct VariationConfig {
    double p_crossover{0.8};
    double p_mutation{0.2};
    int init_max_depth{5};
    double constant_min{-1.0};
    double constant_max{1.0};

    // Throws ConfigError.
    void validate() const;
};

[[nodiscard]] std::string format_real(double v);

// Random trees. `grow` may stop early at a terminal; `full` places terminals only at max_depth.
[[nodiscard]] ExprTree grow_tree(int max_depth, std::size_t n_features, const VariationConfig& cfg, Rng& rng);
[[nodiscard]] ExprTree full_tree(int max_depth, std::size_t n_features, const VariationConfig& cfg, Rng& rng);

// Ramped half-and-half over depths {2..init_max_depth}: consecutive pairs share a ramp
// level, the first of each pair is built full and the second grow.
[[nodiscard]] std::vector<ExprTree> rhh_init(std::size_t pop_size, std::size_t n_features, const VariationConfig& cfg,
                                             Rng& rng);

[[nodiscard]] ExprTree swap_crossover(const ExprTree& a, const ExprTree& b, Rng& rng);
[[nodiscard]] ExprTree subtree_mutation(const ExprTree& a, std::size_t n_features, const VariationConfig& cfg, Rng& rng);
[[nodiscard]] ExprTree perturb_constants(const ExprTree& a, double epsilon, Rng& rng);

} // namespace samgp
