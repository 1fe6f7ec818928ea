#include "relevant/config.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>

#include "relevant/error.hpp"

namespace relevant {

namespace {

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected)
{
    throw Error(ErrorKind::InvalidConfig,
                std::string(key) + ": '" + std::string(value) + "' is not " + std::string(expected));
}

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool parse_bool(std::string_view key, std::string_view value)
{
    const auto v = lower(value);
    if (v == "true" || v == "1" || v == "yes" || v == "on") {
        return true;
    }
    if (v == "false" || v == "0" || v == "no" || v == "off") {
        return false;
    }
    bad_value(key, value, "a boolean");
}

std::uint64_t parse_uint(std::string_view key, std::string_view value)
{
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        bad_value(key, value, "a non-negative integer");
    }
    return out;
}

double parse_real(std::string_view key, std::string_view value)
{
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size() || !std::isfinite(out)) {
        bad_value(key, value, "a finite number");
    }
    return out;
}

std::string real_text(double v)
{
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return {buf.data(), res.ptr};
}

std::string bool_text(bool v) { return v ? "true" : "false"; }

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

struct Field {
    std::string key;
    std::function<void(PipelineConfig&, std::string_view)> set;
    std::function<std::string(const PipelineConfig&)> get;
};

template <typename Member>
Field bool_field(std::string key, Member member)
{
    return {key, [member, key](PipelineConfig& c, std::string_view v) { std::invoke(member, c) = parse_bool(key, v); },
            [member](const PipelineConfig& c) { return bool_text(std::invoke(member, c)); }};
}

template <typename T, typename Member>
Field uint_field(std::string key, Member member)
{
    return {key,
            [member, key](PipelineConfig& c, std::string_view v) {
                std::invoke(member, c) = static_cast<T>(parse_uint(key, v));
            },
            [member](const PipelineConfig& c) { return std::to_string(std::invoke(member, c)); }};
}

template <typename Member>
Field real_field(std::string key, Member member)
{
    return {key, [member, key](PipelineConfig& c, std::string_view v) { std::invoke(member, c) = parse_real(key, v); },
            [member](const PipelineConfig& c) { return real_text(std::invoke(member, c)); }};
}

template <typename Member>
Field path_field(std::string key, Member member)
{
    return {key, [member](PipelineConfig& c, std::string_view v) { std::invoke(member, c) = std::string(v); },
            [member](const PipelineConfig& c) { return std::invoke(member, c).string(); }};
}

const std::vector<Field>& fields()
{
    static const std::vector<Field> table = [] {
        std::vector<Field> f;
        f.push_back(bool_field("preprocess.filter_person_names",
                               [](auto& c) -> auto& { return c.preprocess.filter_person_names; }));
        f.push_back(bool_field("preprocess.filter_citations",
                               [](auto& c) -> auto& { return c.preprocess.filter_citations; }));
        f.push_back(bool_field("preprocess.stem_and_lemmatize",
                               [](auto& c) -> auto& { return c.preprocess.stem_and_lemmatize; }));
        f.push_back({"preprocess.entity_source",
                     [](PipelineConfig& c, std::string_view v) {
                         const auto s = lower(v);
                         if (s == "rule" || s == "rule_based") {
                             c.preprocess.entity_source = EntitySource::RuleBased;
                         } else if (s == "sidecar") {
                             c.preprocess.entity_source = EntitySource::Sidecar;
                         } else if (s == "off") {
                             c.preprocess.entity_source = EntitySource::Off;
                         } else {
                             bad_value("preprocess.entity_source", v, "one of rule, sidecar, off");
                         }
                     },
                     [](const PipelineConfig& c) -> std::string {
                         switch (c.preprocess.entity_source) {
                         case EntitySource::RuleBased:
                             return "rule";
                         case EntitySource::Sidecar:
                             return "sidecar";
                         case EntitySource::Off:
                             return "off";
                         }
                         return "rule";
                     }});
        f.push_back({"extraction.max_n",
                     [](PipelineConfig& c, std::string_view v) {
                         const auto n = parse_uint("extraction.max_n", v);
                         if (n > 64) {
                             bad_value("extraction.max_n", v, "an n-gram order up to 64");
                         }
                         c.extraction.max_n = static_cast<int>(n);
                     },
                     [](const PipelineConfig& c) { return std::to_string(c.extraction.max_n); }});
        f.push_back(uint_field<std::uint64_t>("extraction.min_term_freq",
                                              [](auto& c) -> auto& { return c.extraction.min_term_freq; }));
        f.push_back(real_field("scoring.epsilon", [](auto& c) -> auto& { return c.scoring.epsilon; }));
        f.push_back({"scoring.penalty_exponent",
                     [](PipelineConfig& c, std::string_view v) {
                         c.scoring.penalty_exponent = PenaltyExponent::parse(v);
                     },
                     [](const PipelineConfig& c) { return c.scoring.penalty_exponent.to_string(); }});
        f.push_back(real_field("scoring.df_weight", [](auto& c) -> auto& { return c.scoring.df_weight; }));
        f.push_back(bool_field("scoring.hard_filter", [](auto& c) -> auto& { return c.scoring.hard_filter; }));
        f.push_back(real_field("scoring.score_min", [](auto& c) -> auto& { return c.scoring.score_min; }));
        f.push_back({"features.mode",
                     [](PipelineConfig& c, std::string_view v) {
                         const auto s = lower(v);
                         if (s == "score_weighted") {
                             c.features.weighting = FeatureWeighting::ScoreWeighted;
                         } else if (s == "raw_count") {
                             c.features.weighting = FeatureWeighting::RawCount;
                         } else {
                             bad_value("features.mode", v, "score_weighted or raw_count");
                         }
                     },
                     [](const PipelineConfig& c) -> std::string {
                         return c.features.weighting == FeatureWeighting::ScoreWeighted ? "score_weighted"
                                                                                         : "raw_count";
                     }});
        f.push_back(bool_field("features.l2_normalize", [](auto& c) -> auto& { return c.features.l2_normalize; }));
        f.push_back({"model.architecture",
                     [](PipelineConfig& c, std::string_view v) { c.architecture = MlpArchitecture::parse(v); },
                     [](const PipelineConfig& c) { return c.architecture.to_string(); }});
        f.push_back(real_field("model.threshold", [](auto& c) -> auto& { return c.threshold; }));
        f.push_back(
            uint_field<std::size_t>("train.max_iterations", [](auto& c) -> auto& { return c.train.max_iterations; }));
        f.push_back(real_field("train.initial_lr", [](auto& c) -> auto& { return c.train.initial_lr; }));
        f.push_back(uint_field<std::size_t>("train.batch_size", [](auto& c) -> auto& { return c.train.batch_size; }));
        f.push_back(real_field("train.val_fraction", [](auto& c) -> auto& { return c.train.val_fraction; }));
        f.push_back(uint_field<std::size_t>("train.early_stop_patience",
                                            [](auto& c) -> auto& { return c.train.early_stop_patience; }));
        f.push_back(real_field("train.lr_adapt_divisor", [](auto& c) -> auto& { return c.train.lr_adapt_divisor; }));
        f.push_back(uint_field<std::size_t>("train.lr_adapt_patience",
                                            [](auto& c) -> auto& { return c.train.lr_adapt_patience; }));
        f.push_back(real_field("train.tol", [](auto& c) -> auto& { return c.train.tol; }));
        f.push_back({"train.optimizer",
                     [](PipelineConfig& c, std::string_view v) {
                         const auto s = lower(v);
                         if (s == "sgd") {
                             c.train.optimizer = Optimizer::Sgd;
                         } else if (s == "adam") {
                             c.train.optimizer = Optimizer::Adam;
                         } else {
                             bad_value("train.optimizer", v, "sgd or adam");
                         }
                     },
                     [](const PipelineConfig& c) -> std::string {
                         return c.train.optimizer == Optimizer::Sgd ? "sgd" : "adam";
                     }});
        f.push_back(uint_field<std::uint64_t>("train.seed", [](auto& c) -> auto& { return c.train.seed; }));
        f.push_back({"evaluation.top_by",
                     [](PipelineConfig& c, std::string_view v) {
                         const auto s = lower(v);
                         if (s == "total") {
                             c.top_by = TopBy::TotalFrequency;
                         } else if (s == "positive") {
                             c.top_by = TopBy::PositiveFrequency;
                         } else {
                             bad_value("evaluation.top_by", v, "total or positive");
                         }
                     },
                     [](const PipelineConfig& c) -> std::string {
                         return c.top_by == TopBy::TotalFrequency ? "total" : "positive";
                     }});
        f.push_back(path_field("paths.train", [](auto& c) -> auto& { return c.train_path; }));
        f.push_back(path_field("paths.test", [](auto& c) -> auto& { return c.test_path; }));
        f.push_back(path_field("paths.keywords", [](auto& c) -> auto& { return c.keywords_path; }));
        f.push_back(path_field("paths.model", [](auto& c) -> auto& { return c.model_path; }));
        f.push_back(path_field("paths.output", [](auto& c) -> auto& { return c.output_path; }));
        f.push_back(path_field("paths.manual_keywords", [](auto& c) -> auto& { return c.manual_keywords_path; }));
        return f;
    }();
    return table;
}

const Field& find_field(std::string_view key)
{
    const auto& table = fields();
    const auto it = std::find_if(table.begin(), table.end(), [&](const Field& f) { return f.key == key; });
    if (it == table.end()) {
        throw Error(ErrorKind::InvalidConfig, "unknown config key '" + std::string(key) + "'");
    }
    return *it;
}

}  // namespace

void PipelineConfig::set(std::string_view key, std::string_view value)
{
    find_field(key).set(*this, trim(value));
}

std::string PipelineConfig::get(std::string_view key) const { return find_field(key).get(*this); }

void PipelineConfig::validate() const
{
    extraction.validate();
    scoring.validate();
    train.validate();
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw Error(ErrorKind::InvalidConfig, "model.threshold must lie in (0, 1)");
    }
    for (const auto width : architecture.hidden_sizes) {
        if (width == 0) {
            throw Error(ErrorKind::InvalidConfig, "model.architecture widths must be >= 1");
        }
    }
}

const std::vector<std::string>& PipelineConfig::keys()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& f : fields()) {
            out.push_back(f.key);
        }
        return out;
    }();
    return names;
}

PipelineConfig PipelineConfig::parse(std::istream& in)
{
    PipelineConfig config;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line(raw);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorKind::InvalidConfig, "config line " + std::to_string(line_no) + ": expected key = value");
        }
        try {
            config.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const Error& e) {
            throw Error(e.kind(), "config line " + std::to_string(line_no) + ": " + e.message());
        }
    }
    config.validate();
    return config;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::MissingFile, "cannot open config file " + path.string());
    }
    PipelineConfig config = parse(in);
    // relative paths inside a config file are relative to that file
    const auto base = path.parent_path();
    for (auto* p : {&config.train_path, &config.test_path, &config.keywords_path, &config.model_path,
                    &config.output_path, &config.manual_keywords_path}) {
        if (!p->empty() && p->is_relative()) {
            *p = base / *p;
        }
    }
    return config;
}

void PipelineConfig::write(std::ostream& out) const
{
    for (const auto& f : fields()) {
        out << f.key << " = " << f.get(*this) << '\n';
    }
}

}  // namespace relevant
