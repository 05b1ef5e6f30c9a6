#include "samgp/eval.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "samgp/error.hpp"

namespace samgp {

namespace {

void check_features(const ExprTree& tree, const Matrix& features)
{
    const auto needed = tree.required_features();
    if (needed > features.cols()) {
        throw StructuralError("tree references feature x" + std::to_string(needed - 1) + " but the data has " +
                              std::to_string(features.cols()) + " feature column(s)");
    }
}

void apply_unary(Op op, std::span<const double> a, std::span<double> out)
{
    const auto n = out.size();
    switch (op) {
    case Op::Sin:
        for (std::size_t i = 0; i < n; ++i) out[i] = std::sin(a[i]);
        break;
    case Op::Cos:
        for (std::size_t i = 0; i < n; ++i) out[i] = std::cos(a[i]);
        break;
    case Op::Tanh:
        for (std::size_t i = 0; i < n; ++i) out[i] = std::tanh(a[i]);
        break;
    case Op::Square:
        for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * a[i];
        break;
    case Op::Reciprocal:
        for (std::size_t i = 0; i < n; ++i) out[i] = 1.0 / a[i];
        break;
    case Op::Sqrt:
        for (std::size_t i = 0; i < n; ++i) out[i] = std::sqrt(a[i]);
        break;
    case Op::Exp:
        for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(a[i]);
        break;
    case Op::Log:
        for (std::size_t i = 0; i < n; ++i) out[i] = std::log(a[i]);
        break;
    default:
        break;
    }
}

void apply_binary(Op op, std::span<const double> a, std::span<const double> b, std::span<double> out)
{
    const auto n = out.size();
    switch (op) {
    case Op::Add:
        for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
        break;
    case Op::Sub:
        for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
        break;
    case Op::Mul:
        for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
        break;
    case Op::Div:
        for (std::size_t i = 0; i < n; ++i) out[i] = a[i] / b[i];
        break;
    default:
        break;
    }
}

void apply_terminal(const Node& node, const Matrix& features, std::span<double> out)
{
    if (node.type == NodeType::Feature) {
        const auto col = features.col(node.feature);
        std::copy(col.begin(), col.end(), out.begin());
    } else {
        std::fill(out.begin(), out.end(), node.value);
    }
}

} // namespace

Semantics Semantics::from_values(std::vector<double> v)
{
    const bool ok = all_finite(v);
    return Semantics{std::move(v), ok};
}

bool all_finite(std::span<const double> v) noexcept
{
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

Semantics evaluate(const ExprTree& tree, const Matrix& features)
{
    check_features(tree, features);
    const auto rows = features.rows();
    const auto nodes = tree.nodes();

    // Right-to-left over the prefix sequence; operands are on top of the stack.
    std::vector<std::vector<double>> stack;
    std::vector<std::vector<double>> pool;
    auto take = [&] {
        if (pool.empty()) {
            return std::vector<double>(rows);
        }
        auto v = std::move(pool.back());
        pool.pop_back();
        return v;
    };

    for (std::size_t k = nodes.size(); k-- > 0;) {
        const auto& node = nodes[k];
        auto out = take();
        switch (node.arity()) {
        case 0:
            apply_terminal(node, features, out);
            break;
        case 1:
            apply_unary(node.op, stack.back(), out);
            pool.push_back(std::move(stack.back()));
            stack.pop_back();
            break;
        default: {
            auto& lhs = stack[stack.size() - 1];
            auto& rhs = stack[stack.size() - 2];
            apply_binary(node.op, lhs, rhs, out);
            pool.push_back(std::move(stack.back()));
            stack.pop_back();
            pool.push_back(std::move(stack.back()));
            stack.pop_back();
            break;
        }
        }
        stack.push_back(std::move(out));
    }
    return Semantics::from_values(std::move(stack.back()));
}

SubtreeValues evaluate_subtrees(const ExprTree& tree, const Matrix& features)
{
    check_features(tree, features);
    SubtreeValues values(tree.size(), features.rows());
    const auto nodes = tree.nodes();
    for (std::size_t k = nodes.size(); k-- > 0;) {
        const auto& node = nodes[k];
        switch (node.arity()) {
        case 0:
            apply_terminal(node, features, values.of(k));
            break;
        case 1:
            apply_unary(node.op, values.of(k + 1), values.of(k));
            break;
        default: {
            const auto rhs = k + 1 + tree.subtree_size(k + 1);
            apply_binary(node.op, values.of(k + 1), values.of(rhs), values.of(k));
            break;
        }
        }
    }
    return values;
}

} // namespace samgp
