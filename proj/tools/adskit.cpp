#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "adskit/adskit.hpp"
#include "oracles.hpp"

using namespace adskit;
using nlohmann::json;

namespace {

enum Exit { OK = 0, INPUT_INVALID = 2, REJECTED = 3, INCONCLUSIVE = 4 };

struct Job {
    std::string input, out;
    std::uint64_t seed = 1;
    std::size_t samples = 2000;
    Tolerances tol;
};

int exit_code(ErrorCode c) {
    switch (c) {
    case ErrorCode::NotAchronal:
    case ErrorCode::ElementaryInput:
    case ErrorCode::NotSpacelike:
    case ErrorCode::NotConvex:
    case ErrorCode::NotPositive:
    case ErrorCode::InconsistentLift:
    case ErrorCode::DegenerateGap:
    case ErrorCode::EllipticNoFixedPoint:
    case ErrorCode::NoProximalElement: return REJECTED;
    case ErrorCode::DecompositionFailed: return INCONCLUSIVE;
    default: return INPUT_INVALID;
    }
}

std::string num(double x) {
    char b[40];
    std::snprintf(b, sizeof b, "%.17g", x);
    return b;
}

json tol_json(const Tolerances& t) {
    return {{"eps_q", t.eps_q},           {"eps_causal", t.eps_causal},
            {"eps_hull", t.eps_hull},     {"eps_tr", t.eps_tr},
            {"eps_boundary", t.eps_boundary}, {"dedup", t.dedup},
            {"identity_collision", t.identity_collision}, {"horizon_band", t.horizon_band},
            {"integrator_steps", t.integrator_steps}};
}

std::string tol_line(const Tolerances& t) {
    std::string s;
    json j = tol_json(t);
    for (auto& [k, v] : j.items()) s += (s.empty() ? "" : " ") + k + "=" + v.dump();
    return s;
}

json read_input(const std::string& path) {
    try {
        if (path.empty() || path == "-") return json::parse(std::cin);
        std::ifstream f(path);
        if (!f) throw Error(ErrorCode::InvalidInput, "cannot open " + path);
        return json::parse(f);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidInput, std::string("bad JSON: ") + e.what());
    }
}

template <class T>
T field(const json& j, const char* key) {
    if (!j.contains(key)) throw Error(ErrorCode::InvalidInput, std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw Error(ErrorCode::InvalidInput, std::string("field '") + key + "' has the wrong type");
    }
}

Mat2 read_mat(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_array() || !j[1].is_array() || j[0].size() != 2 ||
        j[1].size() != 2)
        throw Error(ErrorCode::InvalidInput, "matrix must be [[a, b], [c, d]]");
    return {j[0][0].get<double>(), j[0][1].get<double>(), j[1][0].get<double>(), j[1][1].get<double>()};
}

AdsIsometry read_isometry(const json& j) {
    return make_isometry(read_mat(field<json>(j, "gl")), read_mat(field<json>(j, "gr")), j.value("k", 0L));
}

std::vector<ConfPoint> read_points(const json& j) {
    std::vector<ConfPoint> pts;
    for (const auto& p : field<json>(j, "points")) pts.push_back(conf_boundary(field<double>(p, "phi"), field<double>(p, "theta")));
    return pts;
}

ConfPoint read_query(const json& q) {
    return conf_polar(field<double>(q, "rho"), field<double>(q, "phi"), field<double>(q, "theta"));
}

json mat_json(const Mat2& m) { return json::array({{m.a, m.b}, {m.c, m.d}}); }

json class_json(const ElementClass& c) {
    json j{{"type", to_string(c.type)}};
    if (c.type == ElementType::ELLIPTIC) j["angle"] = c.angle;
    if (c.type == ElementType::HYPERBOLIC) j["length"] = c.length;
    return j;
}

void emit(const Job& job, const json& summary) {
    json j = summary;
    j["tolerances"] = tol_json(job.tol);
    std::string text = j.dump(2) + "\n";
    std::cout << text;
    if (!job.out.empty()) std::ofstream(job.out + ".json") << text;
}

// CSV: comment line with the tolerances, then the header row
class Csv {
public:
    Csv(const std::string& path, const Tolerances& t, const std::vector<std::string>& header) : f_(path) {
        if (!f_) throw Error(ErrorCode::InvalidInput, "cannot write " + path);
        f_ << "# " << tol_line(t) << "\n";
        for (std::size_t i = 0; i < header.size(); ++i) f_ << (i ? "," : "") << header[i];
        f_ << "\n";
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) f_ << (i ? "," : "") << cells[i];
        f_ << "\n";
    }

private:
    std::ofstream f_;
};

struct Cloud {
    std::string name;
    std::vector<std::array<double, 3>> pts;
};

// ASCII PLY, one int label per vertex; cylinder coordinates (s0, s1, theta)
void write_ply(const std::string& path, const Tolerances& t, const std::vector<Cloud>& clouds) {
    std::ofstream f(path);
    if (!f) throw Error(ErrorCode::InvalidInput, "cannot write " + path);
    std::size_t n = 0;
    for (const auto& c : clouds) n += c.pts.size();
    f << "ply\nformat ascii 1.0\ncomment adskit point clouds\n";
    f << "comment tolerances " << tol_line(t) << "\n";
    for (std::size_t i = 0; i < clouds.size(); ++i) f << "comment label " << i << " " << clouds[i].name << "\n";
    f << "element vertex " << n << "\nproperty float x\nproperty float y\nproperty float z\nproperty int label\n";
    f << "end_header\n";
    for (std::size_t i = 0; i < clouds.size(); ++i)
        for (const auto& p : clouds[i].pts) f << num(p[0]) << " " << num(p[1]) << " " << num(p[2]) << " " << i << "\n";
}

std::array<double, 3> cyl(const ConfPoint& p) { return {p.s[0], p.s[1], p.theta}; }

// ---------------------------------------------------------------- subcommands

int cmd_classify(const Job& job) {
    auto in = read_input(job.input);
    AdsIsometry g = read_isometry(in);
    auto s = is_synchronized(g, job.tol.eps_tr);
    json j{{"gl", mat_json(g.gl)},
           {"gr", mat_json(g.gr)},
           {"k", g.k},
           {"left", class_json(s.left)},
           {"right", class_json(s.right)},
           {"synchronized", s.synchronized},
           {"case", to_string(s.tag)},
           {"recurrent", affine_recurrence_test(g, in.value("recurrence_steps", 50), job.tol.eps_tr)}};
    if (!s.reason.empty()) j["reason"] = s.reason;
    for (auto [name, m] : {std::pair{"left", g.gl}, std::pair{"right", g.gr}}) {
        auto c = classify_element(m, job.tol.eps_tr);
        if (c.type == ElementType::HYPERBOLIC || c.type == ElementType::PARABOLIC) {
            auto f = fixed_points(m, job.tol.eps_tr);
            j[name]["attractive"] = f.attractive;
            j[name]["repulsive"] = f.repulsive;
        }
    }
    emit(job, j);
    return OK;
}

int cmd_check_achronal(const Job& job) {
    auto pts = read_points(read_input(job.input));
    try {
        auto s = certify_achronal(pts, job.tol);
        json j{{"achronal", true}, {"strict", s.strict}, {"generic", s.generic}, {"points", s.size()}};
        j["elementary"] = to_string(classify_elementary(s).kind);
        if (s.witness.found) j["witness"] = {s.witness.witness.u, s.witness.witness.v, s.witness.witness.x1, s.witness.witness.x2};
        emit(job, j);
        return OK;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NotAchronal) throw;
        json bad = json::array();
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t k = i + 1; k < pts.size(); ++k) {
                double d = sphere_distance(pts[i].s, pts[k].s), dt = std::abs(pts[k].theta - pts[i].theta);
                if (dt > d + job.tol.eps_causal) bad.push_back({{"i", i}, {"j", k}, {"distance", d}, {"dtheta", dt}});
            }
        emit(job, {{"achronal", false}, {"error", e.what()}, {"violations", bad}});
        return REJECTED;
    }
}

int cmd_invisible(const Job& job) {
    auto in = read_input(job.input);
    auto s = certify_achronal(read_points(in), job.tol);
    auto e = build_envelopes(s);
    int nr = in.value("grid_rho", 24), np = in.value("grid_phi", 48), nt = in.value("grid_theta", 24);
    json j{{"points", s.size()}, {"center", e.center}};
    if (in.contains("queries")) {
        json q = json::array();
        for (const auto& x : in["queries"]) {
            ConfPoint p = read_query(x);
            q.push_back({{"rho", x["rho"]}, {"phi", x["phi"]}, {"theta", x["theta"]},
                         {"inside", invisible_contains_conf(e, p)},
                         {"inside_klein", invisible_contains_klein(s, conf_to_ray(p))}});
        }
        j["queries"] = q;
    }
    std::size_t inside = 0, cells = 0;
    if (!job.out.empty()) {
        Csv env(job.out + "_envelopes.csv", job.tol, {"rho", "phi", "f_minus", "f_plus"});
        Csv grid(job.out + "_membership.csv", job.tol, {"rho", "phi", "theta", "inside"});
        for (int a = 0; a < nr; ++a)
            for (int b = 0; b < np; ++b) {
                double rho = 0.5 * kPi * (a + 0.5) / nr, phi = kTwoPi * b / np;
                S2 x = conf_polar(rho, phi, 0).s;
                double lo = e.f_minus(x), hi = e.f_plus(x);
                env.row({num(rho), num(phi), num(lo), num(hi)});
                for (int c = 0; c < nt; ++c) {
                    double th = e.center - kPi + kTwoPi * (c + 0.5) / nt;
                    bool in_e = invisible_contains_conf(e, {x, th});
                    inside += in_e;
                    ++cells;
                    grid.row({num(rho), num(phi), num(th), in_e ? "1" : "0"});
                }
            }
        j["grid_cells"] = cells;
        j["grid_inside"] = inside;
    }
    emit(job, j);
    return OK;
}

int cmd_decompose(const Job& job) {
    auto in = read_input(job.input);
    auto s = certify_achronal(read_points(in), job.tol);
    auto d = decompose(s);
    d.horizon_band = job.tol.horizon_band;
    std::mt19937_64 rng(job.seed);
    std::vector<Cloud> clouds;
    for (std::size_t i = 0; i < d.ends.size(); ++i) clouds.push_back({"end" + std::to_string(i), {}});
    clouds.push_back({"core_plus", {}});
    clouds.push_back({"core_minus", {}});
    clouds.push_back({"horizon_plus", {}});
    clouds.push_back({"horizon_minus", {}});
    std::size_t base = d.ends.size();
    for (std::size_t k = 0; k < job.samples; ++k) {
        ConfPoint p = random_invisible_point(d.env, rng);
        int end = d.end_index(p);
        if (end >= 0) clouds[end].pts.push_back(cyl(p));
        if (d.in_core_plus(p)) clouds[base].pts.push_back(cyl(p));
        if (d.in_core_minus(p)) clouds[base + 1].pts.push_back(cyl(p));
        S2 x = p.s;
        ConfPoint hp{x, d.env_plus.f_minus(x)}, hm{x, d.env_minus.f_plus(x)};
        if (d.env.contains(hp)) clouds[base + 2].pts.push_back(cyl(hp));
        if (d.env.contains(hm)) clouds[base + 3].pts.push_back(cyl(hm));
    }
    json j{{"kind", to_string(d.kind)}, {"ends", d.ends.size()}, {"tents", d.tents.size()}, {"gaps", d.gaps.size()}};
    json counts;
    for (const auto& c : clouds) counts[c.name] = c.pts.size();
    j["clouds"] = counts;
    if (!job.out.empty()) write_ply(job.out + ".ply", job.tol, clouds);
    emit(job, j);
    return OK;
}

int cmd_limit_set(const Job& job) {
    auto in = read_input(job.input);
    GroupSpec spec;
    for (const auto& g : field<json>(in, "generators")) spec.generators.push_back(read_isometry(g));
    spec.max_word_length = in.value("max_word_length", 8);
    spec.dedup = in.value("dedup", job.tol.dedup);
    auto screen = screen_admissible(spec, job.tol);
    json j{{"words", screen.words}, {"screen", to_string(screen.verdict)}, {"abelian", screen.abelian}};
    if (!screen.reason.empty()) j["reason"] = screen.reason;
    if (!screen.witness_word.empty()) j["witness_word"] = screen.witness_word;
    if (screen.verdict == ScreenVerdict::REJECTED) {
        emit(job, j);
        return REJECTED;
    }
    Tolerances t = job.tol;
    t.dedup = spec.dedup;
    auto ls = limit_set(spec, t);
    auto pos = positivity_classify(ls);
    auto inv = invariance_check(spec, ls, 3 * spec.dedup);
    j["limit_points"] = ls.pairs.size();
    j["fill_radius"] = ls.fill_radius;
    j["positivity"] = to_string(pos.verdict);
    j["positivity_worst"] = pos.worst;
    j["invariance_misses"] = inv.misses;
    if (!job.out.empty()) {
        Csv c(job.out + ".csv", job.tol, {"l", "r", "u", "v", "x1", "x2", "word"});
        for (std::size_t i = 0; i < ls.pairs.size(); ++i) {
            const Vec22& v = pos.lifts[i];
            c.row({num(ls.pairs[i].l), num(ls.pairs[i].r), num(v.u), num(v.v), num(v.x1), num(v.x2), ls.words[i]});
        }
    }
    emit(job, j);
    if (screen.verdict == ScreenVerdict::INCONCLUSIVE || pos.verdict == Positivity::MIXED) return INCONCLUSIVE;
    return OK;
}

int cmd_cosmo_time(const Job& job) {
    auto in = read_input(job.input);
    auto s = certify_achronal(read_points(in), job.tol);
    auto e = build_envelopes(s);
    std::vector<ConfPoint> qs;
    if (in.contains("queries")) {
        for (const auto& q : in["queries"]) qs.push_back(read_query(q));
    } else {
        std::mt19937_64 rng(job.seed);
        for (std::size_t k = 0; k < std::min<std::size_t>(job.samples, 50); ++k) qs.push_back(random_invisible_point(e, rng));
    }
    json out = json::array();
    std::unique_ptr<Csv> csv;
    if (!job.out.empty())
        csv = std::make_unique<Csv>(job.out + ".csv", job.tol,
                                    std::vector<std::string>{"s0", "s1", "s2", "theta", "tau", "tau_shooting", "bracket"});
    for (const auto& p : qs) {
        auto r = cosmological_time(e, p, job.tol.integrator_steps);
        out.push_back({{"s", {p.s[0], p.s[1], p.s[2]}}, {"theta", p.theta}, {"tau", r.tau},
                       {"tau_shooting", r.tau_shooting}, {"bracket", r.bracket}});
        if (csv) csv->row({num(p.s[0]), num(p.s[1]), num(p.s[2]), num(p.theta), num(r.tau), num(r.tau_shooting), num(r.bracket)});
    }
    emit(job, {{"queries", out}});
    return OK;
}

int cmd_gauss(const Job& job) {
    auto in = read_input(job.input);
    std::vector<TPoint> tp;
    json j;
    if (in.contains("triangles")) {
        TriSurface surf;
        for (const auto& v : field<json>(in, "vertices")) {
            if (!v.is_array() || v.size() != 4) throw Error(ErrorCode::InvalidInput, "vertex must have 4 entries");
            Vec22 x{v[0].get<double>(), v[1].get<double>(), v[2].get<double>(), v[3].get<double>()};
            if (std::abs(q_form(x) + 1) > 1e-8) throw Error(ErrorCode::NotOnQuadric, "vertex is not on Q = -1");
            surf.vertices.push_back(x);
        }
        for (const auto& t : field<json>(in, "triangles")) {
            std::array<int, 3> tri{t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>()};
            for (int i : tri)
                if (i < 0 || i >= static_cast<int>(surf.vertices.size()))
                    throw Error(ErrorCode::InvalidInput, "triangle index out of range");
            surf.triangles.push_back(tri);
        }
        tp = gauss_map(surf);
        j["mode"] = "gauss_map";
        j["vertices"] = tp.size();
    } else {
        auto s = certify_achronal(read_points(in), job.tol);
        auto r = sigma_map_check(s, in.value("paths", job.samples / 2), job.seed);
        j = {{"mode", "sigma"},         {"paths", r.paths},       {"skipped", r.skipped},
             {"violations", r.violations}, {"max_ratio", r.max_ratio}, {"min_uv", r.min_uv},
             {"max_identity_error", r.max_identity_error}, {"max_tau_gap", r.max_tau_gap}, {"pass", r.pass()}};
        SigmaMap sm(s);
        std::mt19937_64 rng(job.seed);
        std::uniform_real_distribution<double> U(0, 1);
        for (std::size_t k = 0; k < job.samples / 4; ++k) {
            auto lp = sm.level_point(conf_polar(1.2 * std::sqrt(U(rng)), kTwoPi * U(rng), 0).s);
            if (lp) tp.push_back(sm.pair(conf_to_quadric(*lp)));
        }
    }
    if (!job.out.empty()) {
        Csv c(job.out + ".csv", job.tol, {"xu", "xv", "x1", "x2", "yu", "yv", "y1", "y2", "zl_re", "zl_im", "zr_re", "zr_im"});
        for (const auto& p : tp) {
            auto z = project_h2xh2(p);
            c.row({num(p.x.u), num(p.x.v), num(p.x.x1), num(p.x.x2), num(p.y.u), num(p.y.v), num(p.y.x1), num(p.y.x2),
                   num(z.left.real()), num(z.left.imag()), num(z.right.real()), num(z.right.imag())});
        }
    }
    emit(job, j);
    return j.value("pass", true) ? OK : REJECTED;
}

// ---------------------------------------------------------------- crosscheck

struct Check {
    std::string name;
    std::size_t cases = 0, failures = 0;
};

std::vector<Check> crosschecks(std::uint64_t seed) {
    std::vector<Check> out;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0, 1);

    {
        Check c{"causality: analytic vs lattice paths"};
        std::vector<S2> pts;
        for (int i = 0; i < 40; ++i) pts.push_back(random_hemisphere(rng));
        oracle::HemisphereGraph G(0.02, 0.08, pts);
        std::vector<std::size_t> tg;
        for (int k = 1; k < 40; ++k) tg.push_back(G.extra_index(k));
        auto d = G.distances(G.extra_index(0), tg);
        for (int k = 1; k < 40; ++k) {
            double dt = 3 * (2 * U(rng) - 1);
            if (std::abs(d[k - 1] - std::abs(dt)) < 0.04) continue;
            ++c.cases;
            c.failures += (d[k - 1] <= std::abs(dt)) != causally_related(ConfPoint{pts[0], 0}, ConfPoint{pts[k], dt}).related;
        }
        out.push_back(c);
    }
    {
        Check c{"invisible: conformal vs Klein membership"};
        for (int t = 0; t < 5; ++t) {
            auto s = certify_achronal(oracle::random_achronal(3 + 5 * t, rng));
            auto e = build_envelopes(s);
            for (int k = 0; k < 2000; ++k) {
                S2 x = random_hemisphere(rng);
                if (x[2] < 1e-6) continue;
                ConfPoint p{x, e.center + kPi * (2 * U(rng) - 1)};
                if (std::min(std::abs(p.theta - e.f_minus(x)), std::abs(p.theta - e.f_plus(x))) < 1e-6) continue;
                ++c.cases;
                c.failures += invisible_contains_conf(e, p) != invisible_contains_klein(s, conf_to_ray(p));
            }
        }
        out.push_back(c);
    }
    {
        Check c{"invisible: envelope Lipschitz certificate"};
        auto s = certify_achronal(oracle::random_achronal(15, rng));
        auto e = build_envelopes(s);
        c.cases = 4000;
        c.failures = oracle::lipschitz_violations([&](const S2& x) { return e.f_minus(x); }, 2000, rng, 1e-9) +
                     oracle::lipschitz_violations([&](const S2& x) { return e.f_plus(x); }, 2000, rng, 1e-9);
        out.push_back(c);
    }
    {
        Check c{"invisible: decomposition coverage"};
        auto s = certify_achronal(oracle::random_achronal(10, rng));
        auto d = decompose(s);
        for (int k = 0; k < 5000; ++k) {
            ++c.cases;
            c.failures += !d.covered(random_invisible_point(d.env, rng));
        }
        out.push_back(c);
    }
    {
        Check c{"isometry: synchronized vs recurrence"};
        for (const auto& x : oracle::sync_suite(90, seed)) {
            ++c.cases;
            bool s = is_synchronized(x.g).synchronized;
            c.failures += s != affine_recurrence_test(x.g, 50) || s != x.synchronized;
        }
        out.push_back(c);
    }
    {
        Check c{"groups: Schottky limit set vs Fuchsian orbit"};
        auto hyp = [](double l, double a) {
            return rotation(a) * Mat2{std::exp(l / 2), 0, 0, std::exp(-l / 2)} * rotation(-a);
        };
        Mat2 a = hyp(3, 0), b = hyp(3, kPi / 4);
        GroupSpec spec;
        spec.generators = {make_isometry(a, a), make_isometry(b, b)};
        spec.max_word_length = 6;
        auto ls = limit_set(spec);
        std::vector<double> orb;
        for (auto z : oracle::fuchsian_orbit({a, b}, 6))
            if (z.imag() < 1e-6 * (1 + std::norm(z))) orb.push_back(wrap_half(std::atan2(1.0, z.real())));
        for (const auto& p : ls.pairs) {
            ++c.cases;
            double best = kPi;
            for (double t : orb) best = std::min(best, rp1pair_distance(p, {t, t}));
            c.failures += best > 2 * spec.dedup;
        }
        ++c.cases;
        c.failures += positivity_classify(ls).verdict != Positivity::ADMISSIBLE_POSITIVE;
        out.push_back(c);
    }
    {
        Check c{"gauss: flow isometry and factor 8"};
        std::normal_distribution<double> N(0, 1);
        auto sl2 = [&]() { double x = N(rng), y = N(rng), z = N(rng); return Mat2{x, y, z, -x}; };
        auto expm = [](const Mat2& m) {
            Mat2 r = Mat2::identity(), t = Mat2::identity();
            for (int i = 1; i < 30; ++i) {
                t = (1.0 / i) * (t * m);
                r = r + t;
            }
            return r;
        };
        for (int k = 0; k < 500; ++k) {
            TPoint p = act_on_tpoint(make_isometry(expm(0.5 * sl2()), expm(0.5 * sl2())), base_tpoint());
            p = make_tpoint(p.x, p.y, 1e-8);
            TTangent v = tangent_from_algebra(p, sl2(), sl2());
            double t = 4 * (2 * U(rng) - 1);
            double n0 = t_norm(p, v, 1e-8), n1 = t_norm(gauss_flow(t, p), gauss_flow_push(t, v), 1e-8);
            TTangent w = remove_flow_component(p, v);
            c.cases += 2;
            c.failures += std::abs(n1 - n0) > 1e-10 * (1 + std::abs(n0));
            c.failures += std::abs(h2xh2_norm(p, w) / t_norm(p, w, 1e-8) - 8) > 1e-9;
        }
        out.push_back(c);
    }
    {
        Check c{"gauss: Sigma map contraction"};
        auto s = certify_achronal(oracle::random_achronal(16, rng, true, 0.6));
        auto r = sigma_map_check(s, 100, seed, 8, 1e-6, 2);
        c.cases = r.paths + 1;
        c.failures = r.violations + (r.min_uv < -1e-6) + (r.max_tau_gap > 1e-4);
        out.push_back(c);
    }
    return out;
}

int cmd_crosscheck(const Job& job) {
    auto checks = crosschecks(job.seed);
    bool ok = true;
    std::ostringstream table;
    table << "seed " << job.seed << "\n";
    table << "check                                           cases  failures  verdict\n";
    for (const auto& c : checks) {
        char line[160];
        std::snprintf(line, sizeof line, "%-46s %6zu %9zu  %s\n", c.name.c_str(), c.cases, c.failures,
                      c.failures == 0 ? "PASS" : "FAIL");
        table << line;
        ok = ok && c.failures == 0;
    }
    std::cout << table.str();
    if (!job.out.empty()) {
        Csv csv(job.out + ".csv", job.tol, {"check", "cases", "failures", "verdict"});
        for (const auto& c : checks)
            csv.row({"\"" + c.name + "\"", std::to_string(c.cases), std::to_string(c.failures), c.failures ? "FAIL" : "PASS"});
    }
    return ok ? OK : INCONCLUSIVE;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"adskit: causal structure of AdS3"};
    app.require_subcommand(1);
    Job job;
    std::map<std::string, std::function<int(const Job&)>> handlers = {
        {"classify-isometry", cmd_classify}, {"check-achronal", cmd_check_achronal}, {"invisible", cmd_invisible},
        {"decompose", cmd_decompose},        {"limit-set", cmd_limit_set},          {"cosmo-time", cmd_cosmo_time},
        {"gauss", cmd_gauss},                {"crosscheck", cmd_crosscheck}};
    const std::map<std::string, std::string> help = {
        {"classify-isometry", "classify an isometry and test synchronization"},
        {"check-achronal", "certify achronality of boundary points"},
        {"invisible", "envelope table and membership grid of the invisible domain"},
        {"decompose", "core/end decomposition as labelled point clouds"},
        {"limit-set", "screen a group and sample its limit set"},
        {"cosmo-time", "cosmological time at query points"},
        {"gauss", "Gauss map of a triangulated surface, or the Sigma-map check of a set"},
        {"crosscheck", "run every oracle cross-check and print a table"}};
    for (const auto& [name, text] : help) {
        auto* sc = app.add_subcommand(name, text);
        if (name != "crosscheck") sc->add_option("-i,--input", job.input, "input JSON (default stdin)");
        sc->add_option("-o,--out", job.out, "output path prefix");
        sc->add_option("--seed", job.seed, "random seed");
        sc->add_option("--samples", job.samples, "sampling count");
        sc->add_option("--eps-q", job.tol.eps_q);
        sc->add_option("--eps-tr", job.tol.eps_tr);
        sc->add_option("--dedup", job.tol.dedup);
        sc->add_option("--steps", job.tol.integrator_steps, "integrator steps");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? OK : INPUT_INVALID;
    }
    auto* sc = app.get_subcommands().front();
    try {
        return handlers.at(sc->get_name())(job);
    } catch (const Error& e) {
        std::cerr << "adskit: " << e.what() << "\n";
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "adskit: " << e.what() << "\n";
        return INPUT_INVALID;
    }
}
