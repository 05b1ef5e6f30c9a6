#include "samgp/expr.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <utility>

#include "samgp/error.hpp"

namespace samgp {

std::string_view symbol(Op op) noexcept
{
    switch (op) {
    case Op::Add: return "add";
    case Op::Sub: return "sub";
    case Op::Mul: return "mul";
    case Op::Div: return "div";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Tanh: return "tanh";
    case Op::Square: return "square";
    case Op::Reciprocal: return "reciprocal";
    case Op::Sqrt: return "sqrt";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    }
    return "?";
}

bool operator==(const Node& a, const Node& b) noexcept
{
    if (a.type != b.type) {
        return false;
    }
    switch (a.type) {
    case NodeType::Function: return a.op == b.op;
    case NodeType::Feature: return a.feature == b.feature;
    case NodeType::Constant: return std::bit_cast<std::uint64_t>(a.value) == std::bit_cast<std::uint64_t>(b.value);
    }
    return false;
}

ExprTree::ExprTree(std::vector<Node> prefix)
    : nodes_(std::move(prefix))
    , lengths_(nodes_.size(), 1)
{
    if (nodes_.empty()) {
        throw StructuralError("expression tree must contain at least one node");
    }
    // Walk right to left: a stack of (length, depth) for completed subtrees.
    std::vector<std::pair<std::uint32_t, std::size_t>> stack;
    stack.reserve(nodes_.size());
    for (std::size_t k = nodes_.size(); k-- > 0;) {
        const auto a = static_cast<std::size_t>(nodes_[k].arity());
        if (stack.size() < a) {
            throw StructuralError("malformed prefix tree: function '" + std::string(symbol(nodes_[k].op)) +
                                  "' is missing operands");
        }
        std::uint32_t len = 1;
        std::size_t d = 0;
        for (std::size_t c = 0; c < a; ++c) {
            len += stack.back().first;
            d = std::max(d, stack.back().second + 1);
            stack.pop_back();
        }
        lengths_[k] = len;
        stack.emplace_back(len, d);
    }
    if (stack.size() != 1) {
        throw StructuralError("malformed prefix tree: more than one root");
    }
    depth_ = stack.back().second;
}

std::vector<std::size_t> ExprTree::children(std::size_t i) const
{
    std::vector<std::size_t> out;
    const int a = nodes_[i].arity();
    out.reserve(static_cast<std::size_t>(a));
    std::size_t c = i + 1;
    for (int k = 0; k < a; ++k) {
        out.push_back(c);
        c += lengths_[c];
    }
    return out;
}

ExprTree ExprTree::subtree(std::size_t i) const
{
    return ExprTree(std::vector<Node>(nodes_.begin() + static_cast<std::ptrdiff_t>(i),
                                      nodes_.begin() + static_cast<std::ptrdiff_t>(i + lengths_[i])));
}

ExprTree ExprTree::replace_subtree(std::size_t i, const ExprTree& replacement) const
{
    std::vector<Node> out;
    out.reserve(nodes_.size() - lengths_[i] + replacement.size());
    out.insert(out.end(), nodes_.begin(), nodes_.begin() + static_cast<std::ptrdiff_t>(i));
    out.insert(out.end(), replacement.nodes_.begin(), replacement.nodes_.end());
    out.insert(out.end(), nodes_.begin() + static_cast<std::ptrdiff_t>(i + lengths_[i]), nodes_.end());
    return ExprTree(std::move(out));
}

std::size_t ExprTree::function_count() const noexcept
{
    return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.is_function(); }));
}

std::size_t ExprTree::constant_count() const noexcept
{
    return static_cast<std::size_t>(
        std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.type == NodeType::Constant; }));
}

std::size_t ExprTree::required_features() const noexcept
{
    std::size_t r = 0;
    for (const auto& n : nodes_) {
        if (n.type == NodeType::Feature) {
            r = std::max<std::size_t>(r, n.feature + 1);
        }
    }
    return r;
}

std::string format_real(double v)
{
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) {
        return "nan";
    }
    return std::string(buf.data(), end);
}

std::string ExprTree::to_string() const
{
    std::string out;
    // Closing parens are emitted once a function's last operand completes.
    std::vector<int> pending;
    for (const auto& n : nodes_) {
        if (!out.empty() && out.back() != '(') {
            out += ' ';
        }
        switch (n.type) {
        case NodeType::Function:
            out += '(';
            out += symbol(n.op);
            pending.push_back(n.arity());
            continue;
        case NodeType::Feature:
            out += 'x';
            out += std::to_string(n.feature);
            break;
        case NodeType::Constant:
            out += format_real(n.value);
            break;
        }
        while (!pending.empty() && --pending.back() == 0) {
            out += ')';
            pending.pop_back();
        }
    }
    return out;
}

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    std::vector<Node> run()
    {
        std::vector<Node> nodes;
        parse_expr(nodes);
        skip_ws();
        if (pos_ != text_.size()) {
            fail("trailing input");
        }
        return nodes;
    }

private:
    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    std::string_view token()
    {
        skip_ws();
        const auto start = pos_;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '(' &&
               text_[pos_] != ')') {
            ++pos_;
        }
        return text_.substr(start, pos_ - start);
    }

    [[noreturn]] void fail(const std::string& why) const
    {
        throw StructuralError("cannot parse expression at offset " + std::to_string(pos_) + ": " + why);
    }

    // Iterative so that arbitrarily deep trees parse without exhausting the stack. Each
    // open function keeps its name and the number of operands still expected.
    void parse_expr(std::vector<Node>& out)
    {
        std::vector<std::pair<std::string_view, int>> open;
        do {
            skip_ws();
            if (pos_ >= text_.size()) {
                fail("unexpected end of input");
            }
            if (text_[pos_] == '(') {
                ++pos_;
                const auto name = token();
                const auto* it = std::find_if(std::begin(kAllOps), std::end(kAllOps), [&](Op o) { return symbol(o) == name; });
                if (it == std::end(kAllOps)) {
                    fail("unknown function '" + std::string(name) + "'");
                }
                out.push_back(Node::function(*it));
                open.emplace_back(name, arity(*it));
                continue;
            }
            out.push_back(parse_terminal());
            // Close every function whose last operand just completed.
            while (!open.empty() && --open.back().second == 0) {
                skip_ws();
                if (pos_ >= text_.size() || text_[pos_] != ')') {
                    fail("expected ')' after operands of '" + std::string(open.back().first) + "'");
                }
                ++pos_;
                open.pop_back();
            }
        } while (!open.empty());
    }

    Node parse_terminal()
    {
        const auto tok = token();
        if (tok.empty()) {
            fail("expected a terminal");
        }
        if (tok.front() == 'x') {
            std::uint32_t index = 0;
            auto [p, ec] = std::from_chars(tok.data() + 1, tok.data() + tok.size(), index);
            if (ec != std::errc{} || p != tok.data() + tok.size() || tok.size() == 1) {
                fail("bad feature reference '" + std::string(tok) + "'");
            }
            return Node::feature_ref(index);
        }
        double v = 0.0;
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || p != tok.data() + tok.size()) {
            fail("bad constant '" + std::string(tok) + "'");
        }
        return Node::constant(v);
    }

    std::string_view text_;
    std::size_t pos_{0};
};

Node random_terminal(std::size_t n_features, const VariationConfig& cfg, Rng& rng)
{
    // Features and the ephemeral constant are equally likely.
    const auto pick = std::uniform_int_distribution<std::size_t>(0, n_features)(rng);
    if (pick < n_features) {
        return Node::feature_ref(static_cast<std::uint32_t>(pick));
    }
    return Node::constant(std::uniform_real_distribution<double>(cfg.constant_min, cfg.constant_max)(rng));
}

Node random_function(Rng& rng)
{
    return Node::function(kAllOps[std::uniform_int_distribution<std::size_t>(0, kFunctionCount - 1)(rng)]);
}

void build(std::vector<Node>& out, int depth, int max_depth, bool full, std::size_t n_features,
           const VariationConfig& cfg, Rng& rng)
{
    bool terminal = depth >= max_depth;
    if (!terminal && !full) {
        const double terminals = static_cast<double>(n_features + 1);
        const double p_terminal = terminals / (terminals + static_cast<double>(kFunctionCount));
        terminal = std::bernoulli_distribution(p_terminal)(rng);
    }
    if (terminal) {
        out.push_back(random_terminal(n_features, cfg, rng));
        return;
    }
    const auto f = random_function(rng);
    out.push_back(f);
    for (int k = 0; k < f.arity(); ++k) {
        build(out, depth + 1, max_depth, full, n_features, cfg, rng);
    }
}

void require_features(std::size_t n_features)
{
    if (n_features == 0) {
        throw ConfigError("at least one input feature is required");
    }
}

} // namespace

ExprTree ExprTree::parse(std::string_view text)
{
    return ExprTree(Parser(text).run());
}

void VariationConfig::validate() const
{
    if (p_crossover < 0.0 || p_mutation < 0.0 || std::abs(p_crossover + p_mutation - 1.0) > 1e-9) {
        throw ConfigError("crossover and mutation probabilities must be non-negative and sum to 1");
    }
    if (init_max_depth < 0) {
        throw ConfigError("initial maximum depth must be non-negative");
    }
    if (!(constant_min <= constant_max) || !std::isfinite(constant_min) || !std::isfinite(constant_max)) {
        throw ConfigError("constant range must be a finite closed interval");
    }
}

ExprTree grow_tree(int max_depth, std::size_t n_features, const VariationConfig& cfg, Rng& rng)
{
    require_features(n_features);
    std::vector<Node> nodes;
    build(nodes, 0, max_depth, false, n_features, cfg, rng);
    return ExprTree(std::move(nodes));
}

ExprTree full_tree(int max_depth, std::size_t n_features, const VariationConfig& cfg, Rng& rng)
{
    require_features(n_features);
    std::vector<Node> nodes;
    build(nodes, 0, max_depth, true, n_features, cfg, rng);
    return ExprTree(std::move(nodes));
}

std::vector<ExprTree> rhh_init(std::size_t pop_size, std::size_t n_features, const VariationConfig& cfg, Rng& rng)
{
    if (pop_size == 0) {
        throw ConfigError("population size must be positive");
    }
    require_features(n_features);
    cfg.validate();

    const int min_depth = std::min(2, cfg.init_max_depth);
    const auto levels = static_cast<std::size_t>(cfg.init_max_depth - min_depth + 1);

    std::vector<ExprTree> population;
    population.reserve(pop_size);
    for (std::size_t i = 0; i < pop_size; ++i) {
        const int depth = min_depth + static_cast<int>((i / 2) % levels);
        const bool full = i % 2 == 0;
        population.push_back(full ? full_tree(depth, n_features, cfg, rng) : grow_tree(depth, n_features, cfg, rng));
    }
    return population;
}

ExprTree swap_crossover(const ExprTree& a, const ExprTree& b, Rng& rng)
{
    const auto at = std::uniform_int_distribution<std::size_t>(0, a.size() - 1)(rng);
    const auto from = std::uniform_int_distribution<std::size_t>(0, b.size() - 1)(rng);
    return a.replace_subtree(at, b.subtree(from));
}

ExprTree subtree_mutation(const ExprTree& a, std::size_t n_features, const VariationConfig& cfg, Rng& rng)
{
    const auto at = std::uniform_int_distribution<std::size_t>(0, a.size() - 1)(rng);
    return a.replace_subtree(at, grow_tree(cfg.init_max_depth, n_features, cfg, rng));
}

ExprTree perturb_constants(const ExprTree& a, double epsilon, Rng& rng)
{
    if (!(epsilon >= 0.0)) {
        throw ConfigError("perturbation magnitude must be non-negative");
    }
    std::vector<Node> nodes(a.nodes().begin(), a.nodes().end());
    for (auto& n : nodes) {
        if (n.type == NodeType::Constant && epsilon > 0.0) {
            n.value += symmetric_uniform(rng, epsilon);
        }
    }
    return ExprTree(std::move(nodes));
}

} // namespace samgp
