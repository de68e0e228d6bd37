#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "pdshift/pdshift.hpp"

// Command-line front end.  All commands are driven through run() so tests
// can exercise them in-process; the binary in tools/ is a thin wrapper.
//
// Exit codes: 0 success, 1 usage / I-O / cap errors, 2 internal-consistency
// violation (a formula disagreeing with the scan meant to confirm it).

namespace pdshift::cli {

namespace detail {

struct Mode {
    enum Kind { formula, eigen, empirical } kind = formula;
    uint64_t n = 0;  // trajectory length for empirical mode
};

inline Mode parse_mode(const std::string& text) {
    if (text == "formula")
        return {Mode::formula, 0};
    if (text == "eigen")
        return {Mode::eigen, 0};
    if (text.rfind("empirical:", 0) == 0) {
        const std::string num = text.substr(10);
        size_t used = 0;
        const unsigned long long n = std::stoull(num, &used);
        if (used != num.size() || n == 0)
            throw std::invalid_argument("bad empirical length in --mode " + text);
        return {Mode::empirical, uint64_t(n)};
    }
    throw std::invalid_argument("--mode must be formula, eigen, or empirical:<n>");
}

// "dyadic:M" expands to the step-function breakpoints 2^0, 2^-1, ..., 2^-M;
// "min:max:samples" to a log-uniform grid from min up to max.
inline std::vector<Rational> sweep_values(const std::string& text) {
    std::vector<Rational> eps;
    if (text.rfind("dyadic:", 0) == 0) {
        const std::string num = text.substr(7);
        size_t used = 0;
        const unsigned long long M = std::stoull(num, &used);
        if (used != num.size())
            throw std::invalid_argument("bad dyadic sweep: " + text);
        for (unsigned long long t = 0; t <= M; ++t)
            eps.push_back(pow2(-long(t)));
        return eps;
    }
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw std::invalid_argument("--sweep expects min:max:samples or dyadic:M");
    const Rational lo = parse_rational(text.substr(0, c1));
    const Rational hi = parse_rational(text.substr(c1 + 1, c2 - c1 - 1));
    const std::string cnt = text.substr(c2 + 1);
    size_t used = 0;
    const unsigned long long samples = std::stoull(cnt, &used);
    if (used != cnt.size() || samples == 0)
        throw std::invalid_argument("bad sample count in --sweep " + text);
    if (lo <= 0 || lo > hi)
        throw std::invalid_argument("--sweep requires 0 < min <= max");
    if (samples == 1)
        return {lo};
    const double llo = std::log(lo.get_d());
    const double lhi = std::log(hi.get_d());
    for (unsigned long long t = 0; t < samples; ++t) {
        const double x = std::exp(llo + (lhi - llo) * double(t) / double(samples - 1));
        Rational r(x);  // doubles are exact dyadic rationals
        if (r <= 0)
            r = lo;
        eps.push_back(r);
    }
    return eps;
}

class Output {
public:
    Output(const std::string& path, bool binary) {
        if (!path.empty()) {
            file_.open(path, binary ? std::ios::out | std::ios::binary : std::ios::out);
            if (!file_)
                throw std::runtime_error("cannot open output file: " + path);
            use_file_ = true;
        }
    }

    std::ostream& stream(std::ostream& fallback) { return use_file_ ? file_ : fallback; }

    void finish() {
        if (use_file_) {
            file_.flush();
            if (!file_)
                throw std::runtime_error("write failure on output file");
        }
    }

private:
    std::ofstream file_;
    bool use_file_ = false;
};

inline std::string fmt_double(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

inline GeneratorMethod parse_method(const std::string& name) {
    if (name == "valuation")
        return GeneratorMethod::valuation;
    if (name == "substitution")
        return GeneratorMethod::substitution;
    if (name == "toeplitz")
        return GeneratorMethod::toeplitz;
    throw std::invalid_argument("--method must be valuation, substitution, or toeplitz");
}

// Window-equality classes of the first n positions at resolution m: class
// ids are dense, equal windows share an id.  Candidate matches found by
// hash are confirmed exactly.
inline std::vector<uint32_t> window_classes(uint64_t n, uint64_t m) {
    std::vector<uint32_t> cls(n, 0);
    if (m == 0)
        return cls;
    auto& om = omega();
    om.ensure(n + m - 1);
    if (m <= 64) {
        std::unordered_map<uint64_t, uint32_t> ids;
        ids.reserve(2 * n);
        for (uint64_t i = 0; i < n; ++i) {
            const uint64_t key = om.window_bits(i + 1, unsigned(m));
            cls[i] = uint32_t(ids.emplace(key, uint32_t(ids.size())).first->second);
        }
        return cls;
    }
    struct Cand {
        uint64_t h;
        uint64_t idx;
    };
    std::vector<Cand> cands(n);
    for (uint64_t i = 0; i < n; ++i)
        cands[i] = {om.window_hash(i + 1, m), i + 1};
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        return a.h != b.h ? a.h < b.h : a.idx < b.idx;
    });
    uint32_t next_id = 0;
    std::vector<std::pair<uint64_t, uint32_t>> reps;  // (position, id) in current hash run
    for (size_t t = 0; t < cands.size(); ++t) {
        if (t == 0 || cands[t].h != cands[t - 1].h)
            reps.clear();
        uint32_t id = UINT32_MAX;
        for (const auto& [pos, rid] : reps) {
            if (om.windows_equal(pos, cands[t].idx, m)) {
                id = rid;
                break;
            }
        }
        if (id == UINT32_MAX) {
            id = next_id++;
            reps.emplace_back(cands[t].idx, id);
        }
        cls[cands[t].idx - 1] = id;
    }
    return cls;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact toolkit for the period-doubling subshift"};
    app.require_subcommand(1);

    // seq
    auto* seq = app.add_subcommand("seq", "Print a prefix of the sequence");
    uint64_t seq_n = 0;
    std::string seq_method = "substitution";
    std::string seq_out;
    seq->add_option("--n", seq_n, "Prefix length")->required();
    seq->add_option("--method", seq_method, "valuation|substitution|toeplitz");
    seq->add_option("--out", seq_out, "Output file (default: stdout)");

    // complexity
    auto* cx = app.add_subcommand("complexity", "Tabulate the complexity function");
    uint64_t cx_mmax = 0;
    bool cx_oracle = false;
    std::string cx_format = "csv", cx_out;
    cx->add_option("--m-max", cx_mmax, "Largest word length")->required();
    cx->add_flag("--oracle", cx_oracle, "Cross-check against a brute-force window scan");
    cx->add_option("--format", cx_format, "csv|json");
    cx->add_option("--out", cx_out, "Output file");

    // measure
    auto* ms = app.add_subcommand("measure", "Tabulate cylinder measures");
    uint64_t ms_m = 0;
    std::string ms_mode = "formula", ms_format = "csv", ms_out;
    ms->add_option("--m", ms_m, "Word length")->required();
    ms->add_option("--mode", ms_mode, "formula|eigen|empirical:<n>");
    ms->add_option("--format", ms_format, "csv|json");
    ms->add_option("--out", ms_out, "Output file");

    // rqa
    auto* rqa = app.add_subcommand("rqa", "Correlation integral, recurrence rate, determinism");
    std::string rqa_quantity;
    uint64_t rqa_ell = 0, rqa_dim = 1;
    std::string rqa_eps, rqa_sweep, rqa_mode = "formula", rqa_format = "csv", rqa_out;
    rqa->add_option("quantity", rqa_quantity, "cint|rr|det")->required();
    rqa->add_option("--ell", rqa_ell, "Minimal line length (default 1, det: 2)");
    rqa->add_option("--dim", rqa_dim, "Embedding dimension");
    rqa->add_option("--eps", rqa_eps, "Threshold: a/b, decimal, or 2^-m");
    rqa->add_option("--sweep", rqa_sweep, "min:max:samples or dyadic:M");
    rqa->add_option("--mode", rqa_mode, "formula|empirical:<n>");
    rqa->add_option("--format", rqa_format, "csv|json");
    rqa->add_option("--out", rqa_out, "Output file");

    // rplot
    auto* rp = app.add_subcommand("rplot", "Recurrence-plot matrix export");
    uint64_t rp_n = 0;
    std::string rp_eps, rp_format = "pgm", rp_out;
    rp->add_option("--n", rp_n, "Trajectory length")->required();
    rp->add_option("--eps", rp_eps, "Threshold")->required();
    rp->add_option("--format", rp_format, "pgm|csv");
    rp->add_option("--out", rp_out, "Output file");

    std::vector<std::string> argv_s;
    argv_s.push_back("pdshift");
    argv_s.insert(argv_s.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : argv_s)
        argv.push_back(s.c_str());

    try {
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    using nlohmann::ordered_json;

    try {
        if (app.got_subcommand(seq)) {
            if (seq_n > prefix_cap_from_env())
                throw std::length_error("prefix cap exceeded: --n " + std::to_string(seq_n) +
                                        " is above the cap of " + std::to_string(prefix_cap_from_env()));
            detail::Output o(seq_out, false);
            auto& os = o.stream(out);
            os << prefix(seq_n, detail::parse_method(seq_method)).str() << "\n";
            o.finish();
            return 0;
        }

        if (app.got_subcommand(cx)) {
            if (cx_mmax < 1)
                throw std::invalid_argument("--m-max must be at least 1");
            detail::Output o(cx_out, false);
            auto& os = o.stream(out);
            ordered_json rows = ordered_json::array();
            if (cx_format == "csv")
                os << (cx_oracle ? "m,k,q,p,p_oracle\n" : "m,k,q,p\n");
            else if (cx_format != "json")
                throw std::invalid_argument("--format must be csv or json");
            for (uint64_t m = 1; m <= cx_mmax; ++m) {
                const auto [mm, k, q] = decompose(m);
                const uint64_t p = complexity(m);
                uint64_t p_oracle = 0;
                if (cx_oracle) {
                    p_oracle = distinct_window_count(m);
                    if (p_oracle != p)
                        throw consistency_error("complexity mismatch at m=" + std::to_string(m) +
                                                ": formula " + std::to_string(p) + ", scan " +
                                                std::to_string(p_oracle));
                }
                if (cx_format == "csv") {
                    os << m << ',' << k << ',' << q << ',' << p;
                    if (cx_oracle)
                        os << ',' << p_oracle;
                    os << '\n';
                } else {
                    ordered_json row{{"m", m}, {"k", k}, {"q", q}, {"p", p}};
                    if (cx_oracle)
                        row["p_oracle"] = p_oracle;
                    rows.push_back(row);
                }
            }
            if (cx_format == "json")
                os << rows.dump(2) << "\n";
            o.finish();
            return 0;
        }

        if (app.got_subcommand(ms)) {
            if (ms_m < 1)
                throw std::invalid_argument("--m must be at least 1");
            const auto mode = detail::parse_mode(ms_mode);
            if (ms_format != "csv" && ms_format != "json")
                throw std::invalid_argument("--format must be csv or json");
            detail::Output o(ms_out, false);
            auto& os = o.stream(out);
            ordered_json rows = ordered_json::array();
            if (mode.kind == detail::Mode::empirical) {
                const LanguageTable lang = enumerate(ms_m);
                if (ms_format == "csv")
                    os << "word,frequency\n";
                for (const auto& e : lang.entries) {
                    const double f = empirical_frequency(e.word, mode.n).get_d();
                    if (ms_format == "csv")
                        os << e.word.str() << ',' << detail::fmt_double(f) << '\n';
                    else
                        rows.push_back({{"word", e.word.str()}, {"frequency", f}});
                }
            } else {
                if (mode.kind == detail::Mode::eigen && ms_m > 256)
                    throw std::invalid_argument("eigen mode is capped at m = 256");
                const MeasureTable table =
                    mode.kind == detail::Mode::eigen ? perron_measure_oracle(ms_m) : measure_table(ms_m);
                if (ms_format == "csv")
                    os << "word,first_index,numerator,denominator\n";
                for (const auto& r : table.rows) {
                    if (ms_format == "csv")
                        os << r.word.str() << ',' << r.first_index << ',' << num_str(r.value) << ','
                           << den_str(r.value) << '\n';
                    else
                        rows.push_back({{"word", r.word.str()},
                                        {"first_index", r.first_index},
                                        {"numerator", num_str(r.value)},
                                        {"denominator", den_str(r.value)}});
                }
            }
            if (ms_format == "json")
                os << rows.dump(2) << "\n";
            o.finish();
            return 0;
        }

        if (app.got_subcommand(rqa)) {
            if (rqa_quantity != "cint" && rqa_quantity != "rr" && rqa_quantity != "det")
                throw std::invalid_argument("quantity must be cint, rr, or det");
            const auto mode = detail::parse_mode(rqa_mode);
            if (mode.kind == detail::Mode::eigen)
                throw std::invalid_argument("rqa supports --mode formula or empirical:<n>");
            if (rqa_format != "csv" && rqa_format != "json")
                throw std::invalid_argument("--format must be csv or json");
            if (rqa_dim < 1)
                throw std::invalid_argument("--dim must be at least 1");
            uint64_t ell = rqa_ell;
            if (ell == 0)
                ell = rqa_quantity == "det" ? 2 : 1;
            if (rqa_quantity == "det" && ell < 2)
                throw std::invalid_argument("det requires --ell >= 2");
            if (rqa_eps.empty() == rqa_sweep.empty())
                throw std::invalid_argument("exactly one of --eps and --sweep is required");

            std::vector<Rational> grid;
            if (!rqa_eps.empty())
                grid.push_back(parse_rational(rqa_eps));
            else
                grid = detail::sweep_values(rqa_sweep);

            detail::Output o(rqa_out, false);
            auto& os = o.stream(out);
            const bool with_float = mode.kind == detail::Mode::empirical;
            ordered_json rows = ordered_json::array();
            if (rqa_format == "csv")
                os << (with_float
                           ? "eps_numerator,eps_denominator,m_eps,value_numerator,value_denominator,value\n"
                           : "eps_numerator,eps_denominator,m_eps,value_numerator,value_denominator\n");

            for (const Rational& e : grid) {
                const Epsilon eps(e);
                const Epsilon shifted(e * pow2(-long(rqa_dim - 1)));
                Rational v;
                if (mode.kind == detail::Mode::formula) {
                    if (rqa_quantity == "cint")
                        v = correlation_integral(m_epsilon(shifted));
                    else if (rqa_quantity == "rr")
                        v = embedded_rr(rqa_dim, ell, eps);
                    else
                        v = embedded_det(rqa_dim, ell, eps);
                } else {
                    if (rqa_quantity == "cint")
                        v = correlation_sum(mode.n, m_epsilon(shifted));
                    else if (rqa_quantity == "rr")
                        v = recurrence_rate_empirical(ell, mode.n, shifted);
                    else
                        v = recurrence_rate_empirical(ell, mode.n, shifted) /
                            recurrence_rate_empirical(1, mode.n, shifted);
                }
                if (rqa_format == "csv") {
                    os << num_str(e) << ',' << den_str(e) << ',' << m_epsilon(eps) << ','
                       << num_str(v) << ',' << den_str(v);
                    if (with_float)
                        os << ',' << detail::fmt_double(v.get_d());
                    os << '\n';
                } else {
                    ordered_json row{{"eps_numerator", num_str(e)},
                                     {"eps_denominator", den_str(e)},
                                     {"m_eps", m_epsilon(eps)},
                                     {"value_numerator", num_str(v)},
                                     {"value_denominator", den_str(v)}};
                    if (with_float)
                        row["value"] = v.get_d();
                    rows.push_back(row);
                }
            }
            if (rqa_format == "json")
                os << rows.dump(2) << "\n";
            o.finish();
            return 0;
        }

        if (app.got_subcommand(rp)) {
            if (rp_n < 1)
                throw std::invalid_argument("--n must be at least 1");
            if (rp_format != "pgm" && rp_format != "csv")
                throw std::invalid_argument("--format must be pgm or csv");
            if (rp_format == "pgm" && rp_n > 4096)
                throw std::invalid_argument("raster output is capped at n = 4096");
            const Epsilon eps(parse_rational(rp_eps));
            const uint64_t m = m_epsilon(eps);
            const auto cls = detail::window_classes(rp_n, m);

            detail::Output o(rp_out, rp_format == "pgm");
            auto& os = o.stream(out);
            if (rp_format == "pgm") {
                os << "P5\n" << rp_n << " " << rp_n << "\n255\n";
                std::vector<char> row(rp_n);
                for (uint64_t i = 0; i < rp_n; ++i) {
                    for (uint64_t j = 0; j < rp_n; ++j)
                        row[j] = cls[i] == cls[j] ? char(0) : char(255);  // match = black
                    os.write(row.data(), std::streamsize(row.size()));
                }
            } else {
                for (uint64_t i = 0; i < rp_n; ++i) {
                    for (uint64_t j = 0; j < rp_n; ++j) {
                        if (j)
                            os << ',';
                        os << (cls[i] == cls[j] ? '1' : '0');
                    }
                    os << '\n';
                }
            }
            o.finish();
            return 0;
        }

        err << "error: no command given\n";
        return 1;
    } catch (const consistency_error& e) {
        err << "internal-consistency violation: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace pdshift::cli
