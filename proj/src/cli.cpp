#include "ufix/cli.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "ufix/bootstrap.hpp"
#include "ufix/covering.hpp"
#include "ufix/droplet.hpp"
#include "ufix/dynamics.hpp"
#include "ufix/fairness.hpp"
#include "ufix/family_io.hpp"
#include "ufix/martingale.hpp"
#include "ufix/parallel.hpp"
#include "ufix/rng.hpp"
#include "ufix/scales.hpp"
#include "ufix/stable_set.hpp"

namespace ufix::cli {

std::string version() { return UFIX_VERSION; }

namespace {

struct Config {
    std::string mode;
    std::string family;
    std::string direction;
    std::string sizes;
    std::uint64_t trials = 200;
    std::uint64_t seed = 1;
    std::string kind = "voter";
    double time_cap = std::numeric_limits<double>::infinity();
    double kappa = 0;
    std::int64_t n = 64;
    double p = 0.05;
    double tmax = 1e4;
    double q0 = 0.1;
    double a = 0.5;
    double c = 3.5;
    int kmax = 4;
    bool fit = false;
    int exhaustive = 0;
    unsigned workers = default_workers();
    std::string out;
    std::string seeds_file;
    double tolerance = 0.01;
    double sample_interval = 100;
};

std::string num(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string hex(std::uint64_t h) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "0x%016" PRIx64, h);
    return buf;
}

std::string dir_str(const Direction& d) { return std::to_string(d.x()) + "," + std::to_string(d.y()); }

Direction parse_direction(const std::string& s) {
    std::int64_t x = 0, y = 0;
    char comma = 0, extra = 0;
    std::istringstream is(s);
    if (!(is >> x >> comma >> y) || comma != ',' || (is >> extra))
        throw ValidationError("--direction must be DX,DY, got '" + s + "'");
    if (x == 0 && y == 0) throw ValidationError("--direction must be non-zero");
    return Direction(x, y);
}

std::vector<std::int64_t> parse_sizes(const std::string& s) {
    std::vector<std::int64_t> out;
    std::istringstream is(s);
    for (std::string tok; std::getline(is, tok, ',');) {
        std::size_t used = 0;
        std::int64_t v = 0;
        try {
            v = std::stoll(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != tok.size() || v < 1)
            throw ValidationError("--sizes must be a comma-separated list of positive integers");
        out.push_back(v);
    }
    if (out.empty()) throw ValidationError("--sizes is empty");
    return out;
}

// Shared state of one invocation.
struct Context {
    Config cfg;
    CLI::App* sub = nullptr;
    std::string command;
    std::ostringstream body;
    int status = kOk;

    UpdateFamily family() const {
        if (cfg.family.empty()) throw ValidationError("--family is required");
        return resolve_family(cfg.family);
    }
    Direction direction() const {
        if (cfg.direction.empty()) throw ValidationError("--direction is required");
        return parse_direction(cfg.direction);
    }

    // Every option of the subcommand with its effective value, in
    // declaration order.
    std::string flag_set() const {
        std::string s;
        for (const CLI::Option* opt : sub->get_options()) {
            if (opt->get_lnames().empty() || opt->get_name() == "--help") continue;
            const std::string name = "--" + opt->get_lnames().front();
            if (opt->get_expected_max() == 0) {
                if (opt->count() > 0) s += " " + name;
                continue;
            }
            std::string value;
            if (opt->count() > 0) {
                for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
            } else {
                value = opt->get_default_str();
            }
            s += " " + name + "=" + value;
        }
        return s;
    }

    void header(const UpdateFamily* f) {
        body << "# ufix " << version() << " command=" << command;
        if (!cfg.mode.empty()) body << ' ' << cfg.mode;
        if (f)
            body << " family=" << (f->name().empty() ? "unnamed" : f->name()) << " family_hash=" << hex(f->hash());
        else
            body << " family=none family_hash=none";
        body << " seed=" << cfg.seed << " flags:" << flag_set() << '\n';
    }
};

std::string family_label(const UpdateFamily& f) { return f.name().empty() ? hex(f.hash()) : f.name(); }

void cmd_analyze(Context& ctx) {
    const auto f = ctx.family();
    ctx.header(&f);
    const auto s = stable_set(f);
    auto& os = ctx.body;
    os << "family: " << family_label(f) << '\n';
    os << "rules: " << f.m() << '\n';
    for (std::size_t i = 0; i < f.m(); ++i) os << "rule " << i << ": " << f.rule(i) << '\n';
    if (s.is_whole_circle()) os << "stable_set: whole_circle\n";
    else if (s.empty()) os << "stable_set: empty\n";
    for (const auto& arc : s.arcs()) {
        if (arc.is_point())
            os << "arc: point " << dir_str(arc.start) << '\n';
        else
            os << "arc: " << to_string(arc.kind) << ' ' << dir_str(arc.start) << " -> " << dir_str(arc.end) << '\n';
    }
    os << "classification: " << to_string(classify(s)) << '\n';
}

void cmd_fair(Context& ctx) {
    const auto f = ctx.family();
    const auto y = ctx.direction();
    if (!is_stable(f, y)) throw ValidationError("direction " + dir_str(y) + " is not stable for this family");
    ctx.header(&f);
    ctx.body << render(matching_criterion(f, y), f);
    if (ctx.cfg.exhaustive > 0) {
        ctx.body << '\n' << render(presym_exhaustive(f, y, ctx.cfg.exhaustive, ctx.cfg.workers), f);
    }
}

void cmd_erode(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const auto f = ctx.family();
    const auto y = ctx.direction();
    const auto kind = parse_kind(cfg.kind);
    const auto sizes = parse_sizes(cfg.sizes);
    if (!(cfg.time_cap > 0)) throw ValidationError("--time-cap must be positive");
    if (cfg.mode == "segment") {
        if (!is_stable(f, y)) throw ValidationError("direction " + dir_str(y) + " is not stable for this family");
    }
    // Droplet modes use a stable direction set through y; the droplet for size
    // L is the smallest centred droplet of diameter >= L.
    std::vector<Droplet> droplets;
    if (cfg.mode != "segment") {
        const auto dirs = choose_s4(f, y);
        for (const auto L : sizes) droplets.push_back(droplet_hat(dirs, static_cast<double>(L)));
    }
    ctx.header(&f);

    const std::size_t jobs = sizes.size() * cfg.trials;
    std::vector<ErosionRecord> records(jobs);
    parallel_for(jobs, cfg.workers, [&](std::size_t j) {
        const std::size_t si = j / cfg.trials;
        const std::uint64_t trial = j % cfg.trials;
        const std::uint64_t seed = derive_seed(cfg.seed, trial);
        ErosionRecord r;
        if (cfg.mode == "segment")
            r = segment_erosion(f, y, sizes[si], kind, seed, cfg.time_cap);
        else if (cfg.mode == "droplet")
            r = droplet_erosion(f, droplets[si], kind, seed, cfg.time_cap);
        else
            r = row_coupled_erosion(f, droplets[si], y, kind, seed, cfg.time_cap);
        r.L = sizes[si];
        r.trial = trial;
        r.seed = seed;
        records[j] = std::move(r);
    });

    auto& os = ctx.body;
    os << "experiment,family,kind,direction,L,trial,seed,time,flips,outcome\n";
    std::map<std::int64_t, std::pair<double, std::uint64_t>> eroded;
    std::map<std::pair<std::int64_t, Outcome>, std::uint64_t> other;
    for (const auto& r : records) {
        os << cfg.mode << ',' << family_label(f) << ',' << to_string(kind) << ",\"" << dir_str(y) << "\"," << r.L << ','
           << r.trial << ',' << r.seed << ',' << num(r.time) << ',' << r.flips << ',' << to_string(r.outcome) << '\n';
        if (r.outcome == Outcome::eroded) {
            auto& e = eroded[r.L];
            e.first += r.time;
            ++e.second;
        } else {
            ++other[{r.L, r.outcome}];
        }
    }
    for (const auto& [key, count] : other)
        os << "# " << to_string(key.second) << " L=" << key.first << " count=" << count << '\n';
    if (cfg.fit && jobs > 0) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& [L, e] : eroded) pts.emplace_back(static_cast<double>(L), e.first / static_cast<double>(e.second));
        if (pts.size() < 3) {
            os << "# fit skipped: fewer than three sizes with eroded trials\n";
        } else {
            const auto fit = fit_exponent(pts);
            os << "fit,alpha,prefactor,residual\n";
            os << "fit," << num(fit.alpha) << ',' << num(fit.prefactor) << ',' << num(fit.residual) << '\n';
        }
    }
}

SiteSet initial_seeds(const Context& ctx, const Domain& d) {
    SiteSet seeds(d);
    if (!ctx.cfg.seeds_file.empty()) {
        for (const auto& pt : load_seed_points(ctx.cfg.seeds_file)) {
            if (!d.is_torus() && !d.contains(pt))
                throw ValidationError("seed point (" + std::to_string(pt.x) + "," + std::to_string(pt.y) +
                                      ") lies outside the domain");
            seeds.set(d.index(pt));
        }
        return seeds;
    }
    if (!(ctx.cfg.p >= 0 && ctx.cfg.p <= 1)) throw ValidationError("--p must lie in [0,1]");
    Rng rng(derive_seed(ctx.cfg.seed, 0));
    for (std::size_t i = 0; i < d.size(); ++i)
        if (rng.uniform() < ctx.cfg.p) seeds.set(i);
    return seeds;
}

void cmd_bootstrap(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const auto f = ctx.family();
    if (cfg.mode == "closure") {
        if (cfg.n < 1) throw ValidationError("--n must be >= 1");
        const auto d = Domain::torus(cfg.n);
        const auto seeds = initial_seeds(ctx, d);
        ctx.header(&f);
        const auto closed = closure(f, seeds);
        ctx.body << "n,seed_count,closed_count,spanning\n"
                 << cfg.n << ',' << seeds.count() << ',' << closed.count() << ',' << (closed.full() ? 1 : 0) << '\n';
        return;
    }
    const auto sizes = cfg.sizes.empty() ? std::vector<std::int64_t>{cfg.n} : parse_sizes(cfg.sizes);
    for (const auto n : sizes)
        if (n < 8) throw ValidationError("torus sizes must be >= 8");
    if (cfg.trials < 50) throw ValidationError("--trials must be >= 50");
    if (!(cfg.tolerance > 0 && cfg.tolerance < 1)) throw ValidationError("--tolerance must lie in (0,1)");
    ctx.header(&f);
    auto& os = ctx.body;
    os << "n,p_probe,trials,spanning_count,ci_low,ci_high\n";
    std::vector<PcEstimate> estimates;
    for (const auto n : sizes) {
        auto e = estimate_pc_torus(f, n, cfg.trials, cfg.tolerance, derive_seed(cfg.seed, static_cast<std::uint64_t>(n)),
                                   cfg.workers);
        for (const auto& pr : e.probes)
            os << pr.n << ',' << num(pr.p) << ',' << pr.trials << ',' << pr.spanning << ',' << num(pr.ci.low) << ','
               << num(pr.ci.high) << '\n';
        estimates.push_back(std::move(e));
    }
    for (const auto& e : estimates)
        os << "# estimate n=" << e.n << " p_c=" << num(e.estimate) << " bracket=" << num(e.low) << ".." << num(e.high)
           << " ci=" << num(e.ci.low) << ".." << num(e.ci.high) << '\n';
}

std::vector<Direction> covering_directions(const Context& ctx, const UpdateFamily& f) {
    if (!ctx.cfg.direction.empty()) return choose_s4(f, ctx.direction());
    const auto s = stable_set(f);
    for (const auto& u : s.endpoints()) {
        try {
            return choose_s4(f, u);
        } catch (const ValidationError&) {
        }
    }
    throw ValidationError("no finite droplet shape built from stable directions; pass --direction");
}

void cmd_cover(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const auto f = ctx.family();
    if (cfg.n < 1) throw ValidationError("--n must be >= 1");
    const auto dirs = covering_directions(ctx, f);
    const double kappa = cfg.kappa > 0 ? cfg.kappa : default_kappa(f.radius(), dirs.size());
    const auto d = Domain::box(cfg.n, cfg.n);
    const auto seeds = initial_seeds(ctx, d);
    ctx.header(&f);

    const auto c = covering_algorithm(dirs, kappa, seeds.points());
    const auto closed = closure(f, seeds);
    const auto al = aizenman_lebowitz_violations(c, static_cast<std::int64_t>(std::ceil(kappa)));
    const auto ex = extremal_violations(c, 1.0 / (2.0 * kappa));
    const auto uncovered = uncovered_sites(c, closed);

    auto& os = ctx.body;
    os << "# directions:";
    for (const auto& u : c.directions) os << " (" << dir_str(u) << ')';
    os << " kappa=" << num(kappa) << '\n';
    os << "index,left,right,diameter,sites,active,thresholds\n";
    std::vector<bool> active(c.history.size(), false);
    for (const auto i : c.active) active[i] = true;
    for (std::size_t i = 0; i < c.history.size(); ++i) {
        const auto& h = c.history[i];
        os << i << ',' << (h.left ? std::to_string(*h.left) : "") << ',' << (h.right ? std::to_string(*h.right) : "")
           << ',' << num(h.droplet.diameter()) << ',' << h.droplet.size() << ',' << (active[i] ? 1 : 0) << ',';
        const auto& b = h.droplet.thresholds();
        for (std::size_t k = 0; k < b.size(); ++k) os << (k ? ";" : "") << b[k];
        os << '\n';
    }
    os << "# seeds=" << c.seeds.size() << " merges=" << c.merges() << " closed=" << closed.count()
       << " uncovered=" << uncovered.size() << " al_violations=" << al.size() << " extremal_violations=" << ex.size()
       << '\n';
    if (!uncovered.empty() || !al.empty() || !ex.empty()) ctx.status = kInvariant;
}

void cmd_fixation(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const auto f = ctx.family();
    const auto kind = parse_kind(cfg.kind);
    if (cfg.n < 1) throw ValidationError("--n must be >= 1");
    if (!(cfg.p >= 0 && cfg.p <= 1)) throw ValidationError("--p must lie in [0,1]");
    if (!(cfg.tmax >= 0)) throw ValidationError("--tmax must be non-negative");
    if (!(cfg.sample_interval > 0)) throw ValidationError("--sample-interval must be positive");
    ctx.header(&f);
    const auto r = fixation_experiment(f, cfg.n, cfg.p, kind, cfg.tmax, cfg.sample_interval, cfg.seed);
    auto& os = ctx.body;
    os << "t,minus_density,origin_state\n";
    for (const auto& s : r.samples) os << num(s.t) << ',' << num(s.minus_density) << ',' << s.origin_state << '\n';
    os << "# absorbed=" << (r.absorbed > 0 ? "plus" : r.absorbed < 0 ? "minus" : "none")
       << " absorption_time=" << num(r.absorption_time) << " flips=" << r.flips << '\n';
}

void cmd_scales(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const auto s = scale_sequences(cfg.q0, cfg.a, cfg.c, cfg.kmax);
    ctx.header(nullptr);
    ctx.body << render(s);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Context ctx;
    auto& cfg = ctx.cfg;
    CLI::App app{"Bootstrap percolation and zero-temperature dynamics toolkit", "ufix"};
    app.set_version_flag("--version", version());
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();

    auto family = [&](CLI::App* s) { s->add_option("--family", cfg.family, "catalog name or family JSON file"); };
    auto direction = [&](CLI::App* s) { s->add_option("--direction", cfg.direction, "direction DX,DY"); };
    auto seed = [&](CLI::App* s) { s->add_option("--seed", cfg.seed, "base seed"); };
    auto workers = [&](CLI::App* s) { s->add_option("--workers", cfg.workers, "worker threads")->check(CLI::PositiveNumber); };
    auto output = [&](CLI::App* s) { s->add_option("--out", cfg.out, "output file (default stdout)"); };
    auto kind = [&](CLI::App* s) { s->add_option("--kind", cfg.kind, "voter or ising"); };
    auto seeds_file = [&](CLI::App* s) { s->add_option("--seeds-file", cfg.seeds_file, "seed points, one 'x y' per line"); };

    std::map<CLI::App*, std::function<void(Context&)>> handlers;

    auto* analyze = app.add_subcommand("analyze", "stable set and classification");
    family(analyze);
    output(analyze);
    handlers[analyze] = cmd_analyze;

    auto* fair = app.add_subcommand("fair", "fairness criteria for a stable direction");
    family(fair);
    direction(fair);
    fair->add_option("--exhaustive", cfg.exhaustive, "also check every configuration of this segment length");
    workers(fair);
    output(fair);
    handlers[fair] = cmd_fair;

    auto* erode = app.add_subcommand("erode", "erosion times of segments or droplets");
    erode->add_option("mode", cfg.mode, "segment, droplet or rows")
        ->check(CLI::IsMember({"segment", "droplet", "rows"}))
        ->required();
    family(erode);
    direction(erode);
    erode->add_option("--sizes", cfg.sizes, "comma-separated sizes")->required();
    erode->add_option("--trials", cfg.trials, "trials per size");
    seed(erode);
    kind(erode);
    erode->add_option("--time-cap", cfg.time_cap, "time cap per trial");
    erode->add_flag("--fit", cfg.fit, "append a power-law fit footer");
    workers(erode);
    output(erode);
    handlers[erode] = cmd_erode;

    auto* boot = app.add_subcommand("bootstrap", "closure or critical probability on a torus");
    boot->add_option("mode", cfg.mode, "closure or pc")->check(CLI::IsMember({"closure", "pc"}))->required();
    family(boot);
    boot->add_option("--n", cfg.n, "torus side");
    boot->add_option("--sizes", cfg.sizes, "pc: comma-separated torus sides (default --n)");
    boot->add_option("--p", cfg.p, "closure: seed density");
    seeds_file(boot);
    boot->add_option("--trials", cfg.trials, "pc: trials per probe");
    boot->add_option("--tolerance", cfg.tolerance, "pc: bisection tolerance");
    seed(boot);
    workers(boot);
    output(boot);
    handlers[boot] = cmd_bootstrap;

    auto* cover = app.add_subcommand("cover", "covering algorithm in an n x n box");
    family(cover);
    direction(cover);
    cover->add_option("--n", cfg.n, "box side");
    cover->add_option("--p", cfg.p, "seed density");
    seeds_file(cover);
    cover->add_option("--kappa", cfg.kappa, "merge distance (default 10 * radius * |T|)");
    seed(cover);
    output(cover);
    handlers[cover] = cmd_cover;

    auto* fix = app.add_subcommand("fixation", "dynamics on a torus from a product initial state");
    family(fix);
    kind(fix);
    fix->add_option("--n", cfg.n, "torus side");
    fix->add_option("--p", cfg.p, "initial density of plus");
    fix->add_option("--tmax", cfg.tmax, "time horizon");
    fix->add_option("--sample-interval", cfg.sample_interval, "time between samples");
    seed(fix);
    output(fix);
    handlers[fix] = cmd_fixation;

    auto* scales = app.add_subcommand("scales", "multi-scale sequences in the log domain");
    scales->add_option("--q0", cfg.q0, "initial density");
    scales->add_option("--a", cfg.a, "exponent a");
    scales->add_option("--c", cfg.c, "growth constant c");
    scales->add_option("--kmax", cfg.kmax, "deepest level");
    output(scales);
    handlers[scales] = cmd_scales;

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kValidation;
    }

    for (auto* s : app.get_subcommands()) {
        ctx.sub = s;
        ctx.command = s->get_name();
    }
    try {
        handlers.at(ctx.sub)(ctx);
        if (cfg.out.empty()) {
            out << ctx.body.str();
        } else {
            std::ofstream file(cfg.out, std::ios::binary);
            if (!(file << ctx.body.str()) || !file.flush()) throw IoError("cannot write '" + cfg.out + "'");
        }
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInvariant;
    }
    if (ctx.status == kInvariant) err << "error: covering invariants violated\n";
    return ctx.status;
}

}  // namespace ufix::cli
