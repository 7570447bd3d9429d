#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <thread>

#include "bfh/ainfty.hpp"
#include "bfh/grading.hpp"
#include "bfh/manifolds.hpp"
#include "bfh/slides.hpp"

using namespace bfh;
using nlohmann::json;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitInvariant = 3;

struct Config {
    bool truncated = false;
    bool as_json = false;
    int jobs = 0;
    std::string handedness = "standard";
    std::string reduction = "full";
};

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw InputError(path + ": " + e.what());
    }
}

// {"points": 4k, "matching": [[i,j],...]}, 1-based.
Pmc pmc_from_json(const json& j) {
    try {
        const int n = j.at("points").get<int>();
        std::vector<std::pair<int, int>> pairs;
        for (const auto& p : j.at("matching")) {
            if (p.size() != 2) throw InputError("matching entries must be pairs");
            pairs.push_back({p[0].get<int>() - 1, p[1].get<int>() - 1});
        }
        Pmc z(n, pairs);
        if (!z.valid()) throw InputError("pmc: surgery along the matching is disconnected");
        return z;
    } catch (const json::exception& e) {
        throw InputError(std::string("pmc: ") + e.what());
    }
}

json pmc_to_json(const Pmc& z) {
    json m = json::array();
    for (auto [p, q] : z.matching()) m.push_back({p + 1, q + 1});
    return {{"points", z.n_points()}, {"matching", m}};
}

// --pmc file, or --genus g with --antipodal
Pmc pick_pmc(const std::string& file, int genus, bool antipodal) {
    if (!file.empty()) return pmc_from_json(read_json(file));
    if (genus < 1) throw InputError("genus must be positive");
    return antipodal ? antipodal_pmc(genus) : split_pmc(genus);
}

PipelineOptions pipeline(const Config& c) {
    PipelineOptions opt;
    opt.jobs = c.jobs;
    if (c.reduction == "partial") opt.reduction = Reduction::partial;
    if (c.handedness == "reversed") opt.handedness = TwistHandedness::reversed;
    return opt;
}

std::string idem_str(const Pmc& z, std::uint32_t mask) {
    std::string s = "{";
    for (int i = 0; i < z.n_pairs(); ++i)
        if (mask >> i & 1) {
            auto p = z.points_of(i);
            s += (s.size() > 1 ? "," : "") + std::to_string(p[0] + 1) + "/" + std::to_string(p[1] + 1);
        }
    return s + "}";
}

// ---- algebra -----------------------------------------------------------------

int cmd_algebra(const Config& c, const Pmc& z, std::optional<int> weight) {
    Algebra A(z, weight, c.truncated);
    long products = 0, leibniz_bad = 0, d2_bad = 0;
    for (int a = 0; a < A.size(); ++a) {
        d2_bad += !A.diff(A.diff(a)).empty();
        for (int b : A.starting_at(A.right_idem(a))) {
            const int ab = A.mult(a, b);
            products += ab >= 0;
            if ((ab >= 0 ? A.diff(ab) : Elem{}) != add(A.mult(A.diff(a), Elem{b}), A.mult(Elem{a}, A.diff(b))))
                ++leibniz_bad;
        }
    }
    if (c.as_json) {
        json basis = json::array();
        for (int a = 0; a < A.size(); ++a) {
            json mv = json::array();
            for (auto [p, q] : A.gen(a).moving) mv.push_back({p + 1, q + 1});
            json hz = json::array();
            for (int i = 0; i < z.n_pairs(); ++i)
                if (A.gen(a).horiz >> i & 1) hz.push_back(i);
            basis.push_back({{"moving", mv}, {"horizontals", hz}});
        }
        json out = {{"pmc", pmc_to_json(z)},       {"truncated", c.truncated}, {"dimension", A.size()},
                    {"nonzero_products", products}, {"d_squared_failures", d2_bad}, {"leibniz_failures", leibniz_bad},
                    {"basis", basis}};
        if (weight) out["weight"] = *weight;
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "pmc " << z.str() << (weight ? " weight " + std::to_string(*weight) : " all weights")
                  << (c.truncated ? " (truncated)" : "") << "\n"
                  << "dimension " << A.size() << "\n"
                  << "nonzero products " << products << "\n"
                  << "d^2 failures " << d2_bad << ", Leibniz failures " << leibniz_bad << "\n";
        for (int a = 0; a < A.size(); ++a) std::cout << "  " << to_string(z, A.gen(a)) << "\n";
    }
    return d2_bad || leibniz_bad ? kExitInvariant : 0;
}

// ---- hfhat ---------------------------------------------------------------------

HandlebodySpec handlebody(const json& j, int genus) {
    const std::string k = j.get<std::string>();
    if (k == "zero-framed") return {HandlebodyKind::zero_framed, genus};
    if (k == "self-gluing") return {HandlebodyKind::self_gluing, genus};
    throw InputError("unknown handlebody '" + k + "'");
}

// {"genus": g, "steps": [...], optional "start"/"cap": "zero-framed"|"self-gluing"}.
// Slide points are 1-based; a twist names its pair by one 1-based point.
ClosedInput word_from_json(const json& j) {
    try {
        ClosedInput in;
        const int g = j.at("genus").get<int>();
        if (g < 1) throw InputError("genus must be positive");
        in.word.genus = g;
        in.start = j.contains("start") ? handlebody(j["start"], g) : HandlebodySpec{HandlebodyKind::zero_framed, g};
        in.cap = j.contains("cap") ? handlebody(j["cap"], g) : HandlebodySpec{HandlebodyKind::zero_framed, g};
        for (const auto& st : j.value("steps", json::array())) {
            WordStep w;
            if (st.contains("slide")) {
                w.b1 = st["slide"].at("b1").get<int>() - 1;
                w.c1 = st["slide"].at("c1").get<int>() - 1;
            } else if (st.contains("dehn_twist")) {
                w.kind = WordStep::Kind::twist;
                const auto& p = st["dehn_twist"].at("pair");
                w.point = (p.is_array() ? p.at(0).get<int>() : p.get<int>()) - 1;
                w.power = st["dehn_twist"].value("power", 1);
            } else {
                throw InputError("step must be a slide or a dehn_twist");
            }
            in.word.steps.push_back(w);
        }
        return in;
    } catch (const json::exception& e) {
        throw InputError(std::string("word: ") + e.what());
    }
}

json stages_json(const std::vector<StageCount>& v) {
    json a = json::array();
    for (const auto& s : v) a.push_back({{"label", s.label}, {"before", s.before}, {"after", s.after}});
    return a;
}

void print_stages(const char* title, const std::vector<StageCount>& v) {
    if (v.empty()) return;
    std::cout << title << "\n";
    for (const auto& s : v) std::cout << "  " << s.label << ": " << s.before << " -> " << s.after << "\n";
}

int cmd_hfhat(const Config& c, const ClosedInput& in, bool box) {
    const auto opt = pipeline(c);
    if (box) {
        auto r = hf_hat_box(in, opt);
        if (c.as_json)
            std::cout << json{{"rank", r.rank}, {"complex_size", r.complex_size}}.dump(2) << "\n";
        else
            std::cout << "rank " << r.rank << " (box tensor complex of " << r.complex_size << ")\n";
        return 0;
    }
    auto r = hf_hat_closed(in, opt);
    if (c.as_json) {
        json orbits = json::array();
        for (const auto& o : r.orbits) {
            json m = json::object();
            for (auto [d, k] : o.maslov) m[std::to_string(d)] = k;
            orbits.push_back({{"rank", o.rank}, {"period", o.period}, {"maslov", m}});
        }
        auto all = r.start_stages;
        all.insert(all.end(), r.word_stages.begin(), r.word_stages.end());
        std::cout << json{{"rank", r.total_rank},
                          {"complex_size", r.complex_size},
                          {"orbits", orbits},
                          {"stages", stages_json(all)},
                          {"start_stages", stages_json(r.start_stages)},
                          {"word_stages", stages_json(r.word_stages)},
                          {"cap_stages", stages_json(r.cap_stages)}}
                         .dump(2)
                  << "\n";
    } else {
        print_stages("start handlebody", r.start_stages);
        print_stages("word", r.word_stages);
        std::cout << "Mor complex " << r.complex_size << ", rank " << r.total_rank << "\n";
        for (std::size_t i = 0; i < r.orbits.size(); ++i) {
            const auto& o = r.orbits[i];
            std::cout << "orbit " << i << ": rank " << o.rank;
            if (o.period) std::cout << " (degrees mod " << o.period << ")";
            std::cout << ", maslov";
            for (auto [d, k] : o.maslov) std::cout << " " << d << ":" << k;
            std::cout << "\n";
        }
    }
    return 0;
}

// ---- bimodule dumps ------------------------------------------------------------

json dd_json(const DDStructure& dd) {
    const Pmc& zl = dd.left().pmc();
    const Pmc& zr = dd.right().pmc();
    json gens = json::array(), arrows = json::array();
    for (int x = 0; x < dd.size(); ++x) {
        gens.push_back({{"name", dd.name(x)},
                        {"left_idem", idem_str(zl, dd.idem_left(x))},
                        {"right_idem", idem_str(zr, dd.idem_right(x))}});
        for (const auto& t : dd.delta(x))
            arrows.push_back({{"from", x},
                              {"to", t.to},
                              {"left", to_string(zl, dd.left().gen(t.a))},
                              {"right", to_string(zr, dd.right().gen(t.b))}});
    }
    return {{"left_pmc", pmc_to_json(zl)}, {"right_pmc", pmc_to_json(zr)}, {"generators", gens}, {"arrows", arrows}};
}

int dump_dd(const Config& c, const DDStructure& dd, json extra) {
    const bool ok = verify_d_squared(dd);
    if (c.as_json) {
        json out = dd_json(dd);
        out["d_squared_zero"] = ok;
        out.update(extra);
        std::cout << out.dump(2) << "\n";
    } else {
        for (auto& [k, v] : extra.items()) std::cout << k << ": " << v.dump() << "\n";
        std::cout << dd.size() << " generators, " << dd.arrow_count() << " arrows, d^2 "
                  << (ok ? "= 0" : "!= 0") << "\n";
        for (int x = 0; x < dd.size(); ++x)
            for (const auto& t : dd.delta(x))
                std::cout << "  " << dd.name(x) << " -> " << dd.name(t.to) << "  "
                          << to_string(dd.left().pmc(), dd.left().gen(t.a)) << " (x) "
                          << to_string(dd.right().pmc(), dd.right().gen(t.b)) << "\n";
    }
    return ok ? 0 : kExitInvariant;
}

int cmd_dd_id(const Config& c, const Pmc& z, int weight) {
    auto L = std::make_shared<const Algebra>(z, weight, c.truncated);
    auto R = std::make_shared<const Algebra>(reverse(z), -weight, c.truncated);
    return dump_dd(c, dd_identity(L, R), json{{"weight", weight}});
}

int cmd_dd_slide(const Config& c, const Pmc& z, int b1, int c1, int weight, bool alternate) {
    auto s = apply_arcslide(z, b1 - 1, c1 - 1);
    auto L = std::make_shared<const Algebra>(z, weight, c.truncated);
    auto R = std::make_shared<const Algebra>(reverse(s.target), -weight, c.truncated);
    SlideOptions so;
    so.alternate_basic_choice = alternate;
    auto sb = arcslide_dd(s, L, R, so);
    return dump_dd(c, sb.dd,
                   json{{"slide", s.str()}, {"over", s.over}, {"weight", weight}, {"target", pmc_to_json(s.target)}});
}

int cmd_aa_id(const Config& c, const Pmc& z, bool reverse_order) {
    auto caa = caa_identity(z, 0);
    MinimalModel m(caa.module, homology_retract(*caa.module, reverse_order ? PivotOrder::reverse : PivotOrder::forward));
    const auto& M = *caa.module;
    auto edges = operation_graph(m);
    if (c.as_json) {
        json gens = json::array(), e = json::array(), hom = json::array();
        for (int x = 0; x < M.size(); ++x) gens.push_back(M.name(x));
        for (int h = 0; h < m.size(); ++h) hom.push_back(m.name(h));
        for (const auto& ed : edges)
            e.push_back({{"from", M.name(ed.from)}, {"to", M.name(ed.to)}, {"kind", ed.kind}, {"label", ed.label}});
        std::cout << json{{"generators", gens}, {"homology", hom}, {"edges", e}}.dump(2) << "\n";
    } else {
        std::cout << M.size() << " generators, homology " << m.size() << ":";
        for (int h = 0; h < m.size(); ++h) std::cout << " " << m.name(h);
        std::cout << "\n";
        for (const auto& ed : edges)
            std::cout << "  " << M.name(ed.from) << " -" << ed.kind << (ed.label.empty() ? "" : " " + ed.label)
                      << "-> " << M.name(ed.to) << "\n";
    }
    return 0;
}

// ---- randomized checks ----------------------------------------------------------

int cmd_check(const Config& c, unsigned seed, int words) {
    std::mt19937 rng(seed);
    auto random_word = [&](const Pmc& z0, int len) {
        std::vector<ArcSlide> w;
        Pmc z = z0;
        for (int i = 0; i < len; ++i) {
            std::vector<std::pair<int, int>> mv;
            for (int b = 0; b < z.n_points(); ++b)
                for (int cc : {b - 1, b + 1})
                    if (cc >= 0 && cc < z.n_points() && z.partner(b) != cc) mv.push_back({b, cc});
            auto [b, cc] = mv[rng() % mv.size()];
            w.push_back(apply_arcslide(z, b, cc));
            z = w.back().target;
        }
        return w;
    };
    int bad = 0;
    for (int t = 0; t < words; ++t) {
        const int g = 1 + t % 2;
        const Pmc z = split_pmc(g);
        auto w1 = random_word(z, 1 + int(rng() % 5));
        auto w2 = random_word(w1.back().target, 1 + int(rng() % 5));
        auto w12 = w1;
        w12.insert(w12.end(), w2.begin(), w2.end());
        Mod2Small x;
        x.m = int(rng() % 2);
        for (int i = 0; i < z.n_pairs(); ++i) x.a.push_back(int(rng() % 7) - 3);
        bad += !(xi_psi(w12, x) == xi_psi(w2, xi_psi(w1, x)));
        // each slide of the word gives a bimodule with d^2 = 0
        const auto& s = w1.front();
        auto L = std::make_shared<const Algebra>(s.source, 0, c.truncated);
        auto R = std::make_shared<const Algebra>(reverse(s.target), 0, c.truncated);
        bad += !verify_d_squared(arcslide_dd(s, L, R).dd);
    }
    if (c.as_json)
        std::cout << json{{"seed", seed}, {"words", words}, {"failures", bad}}.dump(2) << "\n";
    else
        std::cout << "seed " << seed << ": " << words << " random words, " << bad << " failures\n";
    return bad ? kExitInvariant : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"HF-hat and bordered invariants from pointed matched circles and arc-slides"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand
    Config cfg;
    cfg.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    app.add_option("--jobs", cfg.jobs, "threads for Mor assembly")->check(CLI::PositiveNumber);
    app.add_flag("--json", cfg.as_json, "JSON output");
    app.add_flag("--truncated", cfg.truncated, "use the truncated algebra (drops multiplicity >= 2)");
    app.add_option("--handedness", cfg.handedness, "Dehn twist handedness")
        ->check(CLI::IsMember({"standard", "reversed"}));
    app.add_option("--reduction", cfg.reduction, "full, or partial (exact-idempotent cancellations only)")
        ->check(CLI::IsMember({"full", "partial"}));

    std::string pmc_file;
    int genus = 1;
    bool antipodal = false;
    auto pmc_opts = [&](CLI::App* sub) {
        sub->add_option("--pmc", pmc_file, "pointed matched circle JSON file");
        sub->add_option("--genus", genus, "split (or antipodal) circle of this genus");
        sub->add_flag("--antipodal", antipodal, "antipodal instead of split circle");
    };

    auto* alg = app.add_subcommand("algebra", "dump the strands algebra");
    pmc_opts(alg);
    std::optional<int> weight;
    alg->add_option("--weight", weight, "weight (default: all)");

    auto* hf = app.add_subcommand("hfhat", "HF-hat of a closed manifold");
    std::string preset_name, word_file;
    bool box = false;
    hf->add_option("--preset", preset_name, "one of: poincare, self-gluing-g1, s1xs2-g1, s1xs2-g2");
    hf->add_option("--word", word_file, "word file JSON");
    hf->add_flag("--box", box, "compute through box tensor products with CFAA(Id)");

    auto* dds = app.add_subcommand("dd-slide", "type DD bimodule of an arc-slide");
    pmc_opts(dds);
    int b1 = 0, c1 = 0, w = 0;
    bool alternate = false;
    dds->add_option("--b1", b1, "sliding point (1-based)")->required();
    dds->add_option("--c1", c1, "point slid over (1-based)")->required();
    dds->add_option("--weight", w, "weight of the left algebra");
    dds->add_flag("--alternate-choice", alternate, "flip the over-slide basic choice");

    auto* ddi = app.add_subcommand("dd-id", "type DD identity bimodule");
    pmc_opts(ddi);
    ddi->add_option("--weight", w, "weight of the left algebra");

    auto* aa = app.add_subcommand("aa-id", "operation graph of the type AA identity");
    pmc_opts(aa);
    bool rev = false;
    aa->add_flag("--reverse-pivots", rev, "build the retract with the reversed pivot order");

    auto* chk = app.add_subcommand("check", "randomized property checks");
    unsigned seed = 1;
    int words = 100;
    chk->add_option("--seed", seed, "random seed");
    chk->add_option("--words", words, "number of random words")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitInput;
    }

    try {
        if (*alg) return cmd_algebra(cfg, pick_pmc(pmc_file, genus, antipodal), weight);
        if (*hf) {
            if (preset_name.empty() == word_file.empty()) throw InputError("give exactly one of --preset, --word");
            ClosedInput in;
            if (!preset_name.empty()) {
                auto p = preset(preset_name);
                if (!p) throw InputError("unknown preset '" + preset_name + "'");
                in = *p;
            } else {
                in = word_from_json(read_json(word_file));
            }
            return cmd_hfhat(cfg, in, box);
        }
        if (*dds) return cmd_dd_slide(cfg, pick_pmc(pmc_file, genus, antipodal), b1, c1, w, alternate);
        if (*ddi) return cmd_dd_id(cfg, pick_pmc(pmc_file, genus, antipodal), w);
        if (*aa) return cmd_aa_id(cfg, pick_pmc(pmc_file, genus, antipodal), rev);
        if (*chk) return cmd_check(cfg, seed, words);
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const InvariantError& e) {
        std::cerr << "invariant failure: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const BoundednessError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    }
    return 0;
}
