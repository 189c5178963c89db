#include "berngt/io.hpp"

#include <charconv>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace berngt {

namespace {

using nlohmann::json;

std::string hex_word(uint64_t w) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = digits[w & 0xF];
        w >>= 4;
    }
    return s;
}

uint64_t parse_hex_word(std::string_view s) {
    uint64_t w = 0;
    for (char c : s) {
        w <<= 4;
        if (c >= '0' && c <= '9') w |= static_cast<uint64_t>(c - '0');
        else if (c >= 'a' && c <= 'f') w |= static_cast<uint64_t>(c - 'a' + 10);
        else if (c >= 'A' && c <= 'F') w |= static_cast<uint64_t>(c - 'A' + 10);
        else throw std::invalid_argument("bad hex digit in row bits");
    }
    return w;
}

std::string words_hex(std::span<const uint64_t> words) {
    std::string s;
    s.reserve(words.size() * 16);
    for (uint64_t w : words) s += hex_word(w);
    return s;
}

void hex_into_words(const std::string& hex, std::span<uint64_t> words) {
    if (hex.size() != words.size() * 16)
        throw std::invalid_argument("row hex length does not match word count");
    for (std::size_t w = 0; w < words.size(); ++w)
        words[w] = parse_hex_word(std::string_view(hex).substr(w * 16, 16));
}

json decoder_stats_json(const DecoderPointStats& s) {
    const WilsonInterval w = s.wilson();
    return json{{"decoder", to_string(s.algorithm)},
                {"trials", s.trials},
                {"successes", s.successes},
                {"success_rate", s.rate()},
                {"wilson_lo", w.lo},
                {"wilson_hi", w.hi},
                {"size_gt_k", s.size_gt_k},
                {"size_lt_k", s.size_lt_k},
                {"not_unique", s.not_unique},
                {"truncated", s.truncated}};
}

json config_json(const ExperimentConfig& c) {
    json decoders = json::array();
    for (Algorithm a : c.decoders) decoders.push_back(to_string(a));
    json out{{"n", c.n},
             {"k", c.k},
             {"p", c.p},
             {"decoders", decoders},
             {"t_grid", c.t_grid},
             {"trials", c.trials},
             {"master_seed", c.master_seed},
             {"threads", c.threads},
             {"sss_node_budget", c.sss_node_budget},
             {"rng", kRngName}};
    if (c.nu.has_value()) out["nu"] = *c.nu;
    return out;
}

} // namespace

std::string format_sig6(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 6);
    return std::string(buf, res.ptr);
}

std::string format_full(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_csv_row(std::ostream& out, std::span<const std::string> fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        const std::string& f = fields[i];
        if (f.find_first_of(",\"\r\n") != std::string::npos) {
            out << '"';
            for (char c : f) {
                if (c == '"') out << '"';
                out << c;
            }
            out << '"';
        } else {
            out << f;
        }
    }
    out << "\r\n";
}

const std::vector<std::string> kCurveCsvHeader = {
    "decoder",   "T",          "trials",     "successes", "success_rate", "wilson_lo",
    "wilson_hi", "size_gt_k",  "size_lt_k",  "not_unique", "truncated"};

void write_curve_csv(std::ostream& out, const SuccessCurve& curve) {
    write_csv_row(out, kCurveCsvHeader);
    for (const CurvePoint& pt : curve.points) {
        for (const DecoderPointStats& s : pt.stats) {
            const WilsonInterval w = s.wilson();
            const std::string fields[] = {to_string(s.algorithm),
                                          std::to_string(pt.T),
                                          std::to_string(s.trials),
                                          std::to_string(s.successes),
                                          format_sig6(s.rate()),
                                          format_sig6(w.lo),
                                          format_sig6(w.hi),
                                          std::to_string(s.size_gt_k),
                                          std::to_string(s.size_lt_k),
                                          std::to_string(s.not_unique),
                                          std::to_string(s.truncated)};
            write_csv_row(out, fields);
        }
    }
}

std::string curve_json(const SuccessCurve& curve) {
    json points = json::array();
    for (const CurvePoint& pt : curve.points) {
        json stats = json::array();
        for (const DecoderPointStats& s : pt.stats) stats.push_back(decoder_stats_json(s));
        points.push_back(json{{"T", pt.T},
                              {"trials", pt.trials},
                              {"sole_defective_count", pt.sole_defective_count},
                              {"decoders", stats}});
    }
    const json doc{{"schema_version", kSchemaVersion},
                   {"tool", std::string(kToolName) + " " + kToolVersion},
                   {"config", config_json(curve.config)},
                   {"points", points}};
    return doc.dump(2);
}

const std::vector<std::string> kFigureCsvHeader = {"theta", "counting_bound", "capacity",
                                                   "dd_rate", "comp_rate"};

void write_figure_csv(std::ostream& out, const std::vector<Figure1Row>& rows) {
    write_csv_row(out, kFigureCsvHeader);
    for (const Figure1Row& r : rows) {
        const std::string fields[] = {format_sig6(r.theta), format_sig6(r.counting_bound),
                                      format_sig6(r.capacity), format_sig6(r.dd_rate),
                                      format_sig6(r.comp_rate)};
        write_csv_row(out, fields);
    }
}

void write_trial_records_jsonl(std::ostream& out, const std::vector<TrialRecord>& records) {
    for (const TrialRecord& rec : records) {
        json decoders = json::array();
        for (const DecoderTrial& d : rec.decoders) {
            decoders.push_back(json{{"decoder", to_string(d.algorithm)},
                                    {"size", d.size},
                                    {"success", d.success},
                                    {"not_unique", d.not_unique},
                                    {"truncated", d.truncated}});
        }
        json line{{"T", rec.T},
                  {"trial", rec.trial_index},
                  {"design_seed", rec.design_seed},
                  {"defect_seed", rec.defect_seed},
                  {"sole_defective", rec.sole_defective},
                  {"decoders", decoders}};
        if (rec.satisfying_size_k_count.has_value())
            line["satisfying_size_k_count"] = *rec.satisfying_size_k_count;
        out << line.dump() << '\n';
    }
}

std::string design_json(const TestDesign& design) {
    json rows = json::array();
    for (int t = 0; t < design.tests(); ++t) rows.push_back(words_hex(design.row(t)));
    const json doc{{"schema_version", kSchemaVersion}, {"type", "test_design"},
                   {"n", design.items()},            {"T", design.tests()},
                   {"p", design.p()},                {"seed", design.seed()},
                   {"rows", rows}};
    return doc.dump(2);
}

TestDesign design_from_json(const std::string& text) {
    const json doc = json::parse(text);
    if (doc.at("type").get<std::string>() != "test_design")
        throw std::invalid_argument("design_from_json: not a test_design document");
    const int n = doc.at("n").get<int>();
    const int T = doc.at("T").get<int>();
    TestDesign design(n, T, doc.at("p").get<double>(), doc.at("seed").get<uint64_t>());
    const auto& rows = doc.at("rows");
    if (static_cast<int>(rows.size()) != T)
        throw std::invalid_argument("design_from_json: row count != T");
    const int rem = n & 63;
    const uint64_t tail_mask = rem ? (uint64_t{1} << rem) - 1 : ~uint64_t{0};
    for (int t = 0; t < T; ++t) {
        hex_into_words(rows[static_cast<std::size_t>(t)].get<std::string>(), design.row(t));
        design.row(t).back() &= tail_mask;
    }
    return design;
}

std::string outcomes_json(const OutcomeVector& y) {
    const json doc{{"schema_version", kSchemaVersion},
                   {"type", "outcomes"},
                   {"T", y.tests()},
                   {"bits", words_hex(y.bits.words())}};
    return doc.dump(2);
}

OutcomeVector outcomes_from_json(const std::string& text) {
    const json doc = json::parse(text);
    if (doc.at("type").get<std::string>() != "outcomes")
        throw std::invalid_argument("outcomes_from_json: not an outcomes document");
    OutcomeVector y(doc.at("T").get<int>());
    hex_into_words(doc.at("bits").get<std::string>(), y.bits.words());
    y.bits.mask_tail();
    return y;
}

} // namespace berngt
