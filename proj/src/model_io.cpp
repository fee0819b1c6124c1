#include "ectshape/model_io.hpp"

#include "ectshape/error.hpp"
#include "ectshape/text.hpp"

#include <cmath>

namespace ectshape {

namespace {

void put_values(std::string& out, std::span<const double> values) {
    for (double v : values) {
        out += ' ';
        out += text::format_double(v);
    }
}

void put_line(std::string& out, std::string_view key, std::span<const double> values) {
    out += key;
    put_values(out, values);
    out += '\n';
}

// Sequential reader over non-comment lines.
class LineCursor {
public:
    explicit LineCursor(std::string_view text) : lines_(text::split_lines(text)) {}

    // Next data line split into tokens; `rest` receives the text after the key.
    std::vector<std::string_view> next(std::string_view* rest = nullptr) {
        while (pos_ < lines_.size() && text::is_comment_or_blank(lines_[pos_])) ++pos_;
        if (pos_ >= lines_.size()) fail("unexpected end of file");
        line_no_ = pos_ + 1;
        std::string_view line = text::trim(lines_[pos_++]);
        if (rest) {
            const auto sp = line.find_first_of(" \t");
            *rest = sp == std::string_view::npos ? std::string_view{} : text::trim(line.substr(sp));
        }
        auto tokens = text::split_whitespace(line);
        return tokens;
    }

    std::vector<std::string_view> expect(std::string_view key, std::size_t count) {
        auto tokens = next();
        if (tokens.empty() || tokens[0] != key) fail("expected '" + std::string(key) + "'");
        if (tokens.size() != count + 1) {
            fail("'" + std::string(key) + "' expects " + std::to_string(count) + " values");
        }
        return tokens;
    }

    std::vector<double> expect_reals(std::string_view key, std::size_t count,
                                     std::size_t skip = 0) {
        auto tokens = expect(key, count + skip);
        std::vector<double> out;
        out.reserve(count);
        for (std::size_t i = 1 + skip; i < tokens.size(); ++i) out.push_back(real(tokens[i]));
        return out;
    }

    long long integer(std::string_view tok) {
        auto v = text::parse_int(tok);
        if (!v) fail("expected integer, got '" + std::string(tok) + "'");
        return *v;
    }

    double real(std::string_view tok) {
        auto v = text::parse_double(tok);
        if (!v || !std::isfinite(*v)) fail("expected finite real, got '" + std::string(tok) + "'");
        return *v;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(ErrorCode::BadModelFile, msg, line_no_);
    }

private:
    std::vector<std::string_view> lines_;
    std::size_t pos_ = 0;
    std::size_t line_no_ = 0;
};

}  // namespace

std::string save_model(const TrainedModel& model, std::string_view header_comment) {
    std::string out = text::comment_block(header_comment);
    out += std::string(kModelMagic) + " v" + std::to_string(kModelFormatVersion) + " " +
           std::string(to_string(model.kind())) + "\n";
    out += "num_classes " + std::to_string(model.num_classes) + "\n";
    out += "num_features " + std::to_string(model.feature_names.size()) + "\n";
    for (const auto& f : model.feature_names) out += "feature " + f + "\n";
    out += "num_class_names " + std::to_string(model.class_names.size()) + "\n";
    for (const auto& c : model.class_names) out += "class " + c + "\n";

    std::visit(
        [&](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, GnbModel>) {
                for (std::size_t c = 0; c < m.priors.size(); ++c) {
                    const std::string idx = " " + std::to_string(c);
                    out += "prior" + idx + " " + text::format_double(m.priors[c]) + "\n";
                    put_line(out, "mean" + idx, m.means[c]);
                    put_line(out, "variance" + idx, m.variances[c]);
                }
            } else if constexpr (std::is_same_v<M, TreeModel>) {
                out += "nodes " + std::to_string(m.nodes.size()) + "\n";
                for (std::size_t i = 0; i < m.nodes.size(); ++i) {
                    const TreeNode& n = m.nodes[i];
                    if (n.is_leaf()) {
                        put_line(out, "leaf " + std::to_string(i), n.distribution);
                    } else {
                        out += "split " + std::to_string(i) + " " + std::to_string(n.feature) +
                               " " + text::format_double(n.threshold) + " " +
                               std::to_string(n.left) + " " + std::to_string(n.right) + "\n";
                    }
                }
            } else {
                out += "layers " + std::to_string(m.inputs) + " " + std::to_string(m.hidden) +
                       " " + std::to_string(m.outputs) + "\n";
                put_line(out, "scale_min", m.scale_min);
                put_line(out, "scale_max", m.scale_max);
                const auto I = static_cast<std::size_t>(m.inputs);
                const auto H = static_cast<std::size_t>(m.hidden);
                for (std::size_t h = 0; h < H; ++h) {
                    put_line(out, "w1 " + std::to_string(h),
                             std::span<const double>(m.w1).subspan(h * I, I));
                }
                put_line(out, "b1", m.b1);
                for (std::size_t o = 0; o < static_cast<std::size_t>(m.outputs); ++o) {
                    put_line(out, "w2 " + std::to_string(o),
                             std::span<const double>(m.w2).subspan(o * H, H));
                }
                put_line(out, "b2", m.b2);
            }
        },
        model.model);
    out += "end\n";
    return out;
}

TrainedModel load_model(std::string_view text) {
    LineCursor cur(text);
    const auto head = cur.next();
    if (head.size() != 3 || head[0] != kModelMagic) cur.fail("missing model header");
    if (head[1] != "v" + std::to_string(kModelFormatVersion)) {
        cur.fail("unsupported model version " + std::string(head[1]));
    }
    ClassifierKind kind{};
    try {
        kind = parse_classifier_kind(head[2]);
    } catch (const Error&) {
        cur.fail("unknown model kind " + std::string(head[2]));
    }

    TrainedModel model;
    model.num_classes = static_cast<int>(cur.integer(cur.expect("num_classes", 1)[1]));
    const auto d = cur.integer(cur.expect("num_features", 1)[1]);
    if (model.num_classes < 2 || d < 1) cur.fail("bad model dimensions");
    const auto K = static_cast<std::size_t>(model.num_classes);
    const auto D = static_cast<std::size_t>(d);
    for (std::size_t j = 0; j < D; ++j) {
        std::string_view rest;
        auto tokens = cur.next(&rest);
        if (tokens.empty() || tokens[0] != "feature" || rest.empty()) cur.fail("expected feature");
        model.feature_names.emplace_back(rest);
    }
    const auto nc = cur.integer(cur.expect("num_class_names", 1)[1]);
    if (nc != 0 && nc != model.num_classes) cur.fail("class name count mismatch");
    for (long long c = 0; c < nc; ++c) {
        std::string_view rest;
        auto tokens = cur.next(&rest);
        if (tokens.empty() || tokens[0] != "class" || rest.empty()) cur.fail("expected class");
        model.class_names.emplace_back(rest);
    }

    // "<key> <index> v0 v1 ..."
    auto indexed_reals = [&](std::string_view key, std::size_t index, std::size_t count) {
        auto tokens = cur.expect(key, count + 1);
        if (cur.integer(tokens[1]) != static_cast<long long>(index)) cur.fail("index out of order");
        std::vector<double> values;
        for (std::size_t i = 2; i < tokens.size(); ++i) values.push_back(cur.real(tokens[i]));
        return values;
    };

    switch (kind) {
        case ClassifierKind::NaiveBayes: {
            GnbModel m;
            m.num_classes = model.num_classes;
            m.num_features = static_cast<int>(D);
            for (std::size_t c = 0; c < K; ++c) {
                m.priors.push_back(indexed_reals("prior", c, 1)[0]);
                m.means.push_back(indexed_reals("mean", c, D));
                m.variances.push_back(indexed_reals("variance", c, D));
                for (double v : m.variances.back()) {
                    if (!(v > 0.0)) cur.fail("variance must be positive");
                }
            }
            model.model = std::move(m);
            break;
        }
        case ClassifierKind::Tree: {
            TreeModel m;
            m.num_classes = model.num_classes;
            m.num_features = static_cast<int>(D);
            const auto count = cur.integer(cur.expect("nodes", 1)[1]);
            if (count < 1) cur.fail("tree needs at least one node");
            const auto N = static_cast<std::size_t>(count);
            for (std::size_t i = 0; i < N; ++i) {
                auto tokens = cur.next();
                if (tokens.size() < 2 || cur.integer(tokens[1]) != static_cast<long long>(i)) {
                    cur.fail("node index out of order");
                }
                TreeNode n;
                if (tokens[0] == "leaf" && tokens.size() == K + 2) {
                    for (std::size_t k = 2; k < tokens.size(); ++k) {
                        n.distribution.push_back(cur.real(tokens[k]));
                    }
                } else if (tokens[0] == "split" && tokens.size() == 6) {
                    n.feature = static_cast<int>(cur.integer(tokens[2]));
                    n.threshold = cur.real(tokens[3]);
                    n.left = static_cast<int>(cur.integer(tokens[4]));
                    n.right = static_cast<int>(cur.integer(tokens[5]));
                    const auto in_range = [&](int v) {
                        return v > static_cast<int>(i) && v < static_cast<int>(N);
                    };
                    if (n.feature < 0 || n.feature >= static_cast<int>(D) || !in_range(n.left) ||
                        !in_range(n.right)) {
                        cur.fail("split references out of range");
                    }
                } else {
                    cur.fail("malformed tree node");
                }
                m.nodes.push_back(std::move(n));
            }
            model.model = std::move(m);
            break;
        }
        case ClassifierKind::Mlp: {
            auto layers = cur.expect("layers", 3);
            const auto I = cur.integer(layers[1]);
            const auto H = cur.integer(layers[2]);
            const auto O = cur.integer(layers[3]);
            if (I != d || O != model.num_classes || H < 1) cur.fail("layer sizes mismatch");
            MlpModel m;
            m.inputs = static_cast<int>(I);
            m.hidden = static_cast<int>(H);
            m.outputs = static_cast<int>(O);
            m.scale_min = cur.expect_reals("scale_min", D);
            m.scale_max = cur.expect_reals("scale_max", D);
            for (std::size_t h = 0; h < static_cast<std::size_t>(H); ++h) {
                auto row = indexed_reals("w1", h, D);
                m.w1.insert(m.w1.end(), row.begin(), row.end());
            }
            m.b1 = cur.expect_reals("b1", static_cast<std::size_t>(H));
            for (std::size_t o = 0; o < K; ++o) {
                auto row = indexed_reals("w2", o, static_cast<std::size_t>(H));
                m.w2.insert(m.w2.end(), row.begin(), row.end());
            }
            m.b2 = cur.expect_reals("b2", K);
            model.model = std::move(m);
            break;
        }
    }
    if (cur.next() != std::vector<std::string_view>{"end"}) cur.fail("expected 'end'");
    return model;
}

}  // namespace ectshape
