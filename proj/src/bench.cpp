#include "prefopt/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>
#include <tuple>

namespace prefopt {

namespace {

using std::numbers::pi;

BoxBounds uniform_box(std::size_t n, double lo, double hi) {
    const auto m = static_cast<Eigen::Index>(n);
    return {Vector::Constant(m, lo), Vector::Constant(m, hi)};
}

BoxBounds box2(double l1, double u1, double l2, double u2) {
    Vector lo(2), hi(2);
    lo << l1, l2;
    hi << u1, u2;
    return {lo, hi};
}

double brochu_sum(const Vector& x) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) s += std::sin(x[i]) + x[i] / 3.0 + std::sin(12.0 * x[i]);
    return s;
}

double hartman(const Vector& x, const Matrix& a, const Matrix& p) {
    static const double c[4] = {1.0, 1.2, 3.0, 3.2};
    double s = 0.0;
    for (Eigen::Index i = 0; i < 4; ++i) {
        double e = 0.0;
        for (Eigen::Index j = 0; j < x.size(); ++j) e += a(i, j) * std::pow(x[j] - p(i, j), 2);
        s += c[i] * std::exp(-e);
    }
    return -s;
}

Matrix rows(std::initializer_list<std::initializer_list<double>> r) {
    Matrix m(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(r.begin()->size()));
    Eigen::Index i = 0;
    for (const auto& row : r) {
        Eigen::Index j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

double thread_cpu_seconds() {
    timespec ts{};
    clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
    return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Feasibility in original units, shared by the reference oracle and the random-search baseline.
bool feasible_point(const Problem& p, const Vector& x) { return p.constraints.satisfied(x, 1e-12); }

}  // namespace

ScalarizationProblem multiobjective_example() {
    ScalarizationProblem mo;
    mo.objectives = {
        [](const Vector& z) { return std::pow(2.0 * z[0] * std::sin(z[1]) - 3.0 * std::cos(z[0] * z[1]), 2); },
        [](const Vector& z) { return z[2] * z[2] * std::pow(z[0] + z[1], 4); },
        [](const Vector& z) { return std::pow(z[0] + z[1] + z[2], 2); },
    };
    mo.inner_bounds = uniform_box(3, -1.0, 1.0);
    mo.inner_pso.seed = 20200101;
    mo.inner_pso.polish_evals = 1000;
    return mo;
}

double closeness_latent(const Vector& f) {
    if (f.size() < 2) throw DimensionError("closeness needs at least two objectives");
    double s = 0.0;
    for (Eigen::Index i = 0; i < f.size(); ++i) {
        for (Eigen::Index j = i + 1; j < f.size(); ++j) s += std::pow(f[i] - f[j], 2);
    }
    return std::sqrt(s);
}

std::vector<std::string> latent_names() {
    return {"1d",        "sasena",   "brochu-2d",   "brochu-4d",     "brochu-6d",     "ackley",        "adjiman",
            "hartman3",  "hartman6", "rosenbrock8", "stepfunction2", "camelsixhumps", "multiobjective"};
}

bool has_latent(const std::string& name) {
    const auto names = latent_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

LatentProblem latent_suite(const std::string& name) {
    LatentProblem p;
    p.name = name;
    p.problem.name = name;
    if (name == "1d") {
        p.problem.bounds = uniform_box(1, -3.0, 3.0);
        p.f = [](const Vector& v) {
            const double x = v[0];
            const double t = 1.0 + x * std::sin(2.0 * x) * std::cos(3.0 * x) / (1.0 + x * x);
            return t * t + x * x / 12.0 + x / 10.0;
        };
    } else if (name == "sasena") {
        p.problem.bounds = uniform_box(2, 0.0, 5.0);
        p.problem.constraints.nonlinear = [](const Vector& x) {
            return Vector::Constant(1, -std::sin(x[0] - x[1] - pi / 8.0));
        };
        p.f = [](const Vector& x) {
            return 2.0 + 0.01 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2) +
                   2.0 * std::pow(2.0 - x[1], 2) + 7.0 * std::sin(0.5 * x[0]) * std::sin(0.7 * x[0] * x[1]);
        };
        p.known_value = -1.1743;
        Vector xs(2);
        xs << 2.7450, 2.3523;
        p.known_point = xs;
    } else if (name == "brochu-2d") {
        p.problem.bounds = uniform_box(2, 0.0, 1.0);
        p.f = [](const Vector& x) { return -std::max(brochu_sum(x) - 1.0, 0.0); };
    } else if (name == "brochu-4d" || name == "brochu-6d") {
        p.problem.bounds = uniform_box(name == "brochu-4d" ? 4 : 6, 0.0, 1.0);
        p.f = [](const Vector& x) { return -brochu_sum(x); };
    } else if (name == "ackley") {
        p.problem.bounds = uniform_box(2, -5.0, 5.0);
        p.f = [](const Vector& x) {
            return -20.0 * std::exp(-0.2 * std::sqrt(0.5 * x.squaredNorm())) -
                   std::exp(0.5 * (std::cos(2 * pi * x[0]) + std::cos(2 * pi * x[1]))) + std::exp(1.0) + 20.0;
        };
    } else if (name == "adjiman") {
        p.problem.bounds = box2(-1.0, 2.0, -1.0, 1.0);
        p.f = [](const Vector& x) { return std::cos(x[0]) * std::sin(x[1]) - x[0] / (x[1] * x[1] + 1.0); };
    } else if (name == "hartman3") {
        p.problem.bounds = uniform_box(3, 0.0, 1.0);
        const Matrix a = rows({{3, 10, 30}, {0.1, 10, 35}, {3, 10, 30}, {0.1, 10, 35}});
        const Matrix q = rows({{0.3689, 0.1170, 0.2673},
                               {0.4699, 0.4387, 0.7470},
                               {0.1091, 0.8732, 0.5547},
                               {0.03815, 0.5743, 0.8828}});
        p.f = [a, q](const Vector& x) { return hartman(x, a, q); };
    } else if (name == "hartman6") {
        p.problem.bounds = uniform_box(6, 0.0, 1.0);
        const Matrix a = rows({{10, 3, 17, 3.5, 1.7, 8},
                               {0.05, 10, 17, 0.1, 8, 14},
                               {3, 3.5, 1.7, 10, 17, 8},
                               {17, 8, 0.05, 10, 0.1, 14}});
        const Matrix q = rows({{0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886},
                               {0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991},
                               {0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650},
                               {0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381}});
        p.f = [a, q](const Vector& x) { return hartman(x, a, q); };
    } else if (name == "rosenbrock8") {
        p.problem.bounds = uniform_box(8, -30.0, 30.0);
        p.f = [](const Vector& x) {
            double s = 0.0;
            for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
                s += 100.0 * std::pow(x[i + 1] - x[i] * x[i], 2) + std::pow(1.0 - x[i], 2);
            }
            return s;
        };
    } else if (name == "stepfunction2") {
        p.problem.bounds = uniform_box(4, -100.0, 100.0);
        p.f = [](const Vector& x) {
            double s = 0.0;
            for (Eigen::Index i = 0; i < x.size(); ++i) s += std::pow(std::floor(x[i] + 0.5), 2);
            return s;
        };
    } else if (name == "camelsixhumps") {
        p.problem.bounds = box2(-2.0, 2.0, -1.0, 1.0);
        p.f = [](const Vector& x) {
            const double a = x[0] * x[0], b = x[1] * x[1];
            return (4.0 - 2.1 * a + a * a / 3.0) * a + x[0] * x[1] + (-4.0 + 4.0 * b) * b;
        };
    } else if (name == "multiobjective") {
        const ScalarizationProblem mo = multiobjective_example();
        p.problem = scalarization_problem(3);
        p.problem.name = name;
        p.scalarization = mo;
        p.payload = [mo](const Vector& x) { return solve_scalarized(mo, simplex_weights(x)).objectives; };
        const PayloadFunction payload = p.payload;
        p.f = [payload](const Vector& x) { return closeness_latent(payload(x)); };
        p.known_value = closeness_latent(Vector::Constant(3, 0.0));
    } else {
        throw ConfigError("unknown problem '" + name + "'");
    }
    return p;
}

Session make_session(const LatentProblem& p, const EngineConfig& cfg) { return Session::create(p.problem, cfg, p.payload); }

Session load_session(const Json& doc) {
    const std::string name = doc.at("problem").at("name").get<std::string>();
    if (has_latent(name)) {
        const LatentProblem p = latent_suite(name);
        return SessionCodec::decode(doc, p.problem.constraints.nonlinear, p.payload);
    }
    return SessionCodec::decode(doc);
}

ReferenceOptimum reference_optimum(const LatentProblem& p, std::size_t restarts, std::uint64_t seed) {
    static std::mutex mutex;
    static std::map<std::tuple<std::string, std::size_t, std::uint64_t>, ReferenceOptimum> cache;
    const auto key = std::make_tuple(p.name, restarts, seed);
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    const ScalingMap sm = ScalingMap::from_problem(p.problem.bounds, p.problem.constraints);
    // Constraints are enforced by rejection so the reference point is exactly feasible.
    MinimizeOptions opt;
    if (!p.problem.constraints.empty()) {
        const Problem& prob = p.problem;
        opt.hard_feasible = [&sm, &prob](const Vector& x) { return feasible_point(prob, sm.from_unit(x)); };
    }
    ReferenceOptimum best{Vector(), std::numeric_limits<double>::infinity()};
    CounterRng streams(seed);
    for (std::size_t r = 0; r < restarts; ++r) {
        PSOConfig cfg;
        cfg.seed = streams.split(r).next_u64();
        cfg.polish_evals = 2000;
        const PSOResult res = pso_minimize([&](const Vector& x) { return p.f(sm.from_unit(x)); }, sm.unit_dim(), cfg, opt);
        const Vector x = sm.from_unit(res.x);
        const double v = p.f(x);
        if (v < best.value) best = {x, v};
    }
    if (!std::isfinite(best.value)) throw SolverError("reference search found no feasible point");
    std::lock_guard lock(mutex);
    cache[key] = best;
    return best;
}

Preference noisy_preference(const LatentFunction& f, const Vector& x, const Vector& y, double d) {
    double fx = f(x), fy = f(y);
    const bool x_first = std::lexicographical_compare(x.data(), x.data() + x.size(), y.data(), y.data() + y.size());
    if (x_first) {
        fx *= 1.0 + d;
    } else {
        fy *= 1.0 + d;
    }
    return preference_from_values(fx, fy);
}

PreferenceOracle noisy_preference_oracle(const LatentFunction& f, double amplitude, std::uint64_t seed) {
    if (!(amplitude >= 0.0)) throw ConfigError("noise amplitude must be nonnegative");
    if (amplitude == 0.0) return [f](const Vector& x, const Vector& y) { return preference_from_values(f(x), f(y)); };
    auto rng = std::make_shared<CounterRng>(seed);
    return [f, amplitude, rng](const Vector& x, const Vector& y) {
        return noisy_preference(f, x, y, rng->uniform(-amplitude, amplitude));
    };
}

void BenchmarkReport::aggregate() {
    median.clear();
    min.clear();
    max.clear();
    std::size_t length = 0;
    for (const auto& r : runs) {
        if (r.ok) length = std::max(length, r.best_values.size());
    }
    for (std::size_t k = 0; k < length; ++k) {
        std::vector<double> col;
        for (const auto& r : runs) {
            if (r.ok && k < r.best_values.size()) col.push_back(r.best_values[k]);
        }
        median.push_back(median_of(col));
        min.push_back(*std::min_element(col.begin(), col.end()));
        max.push_back(*std::max_element(col.begin(), col.end()));
    }
}

std::size_t BenchmarkReport::successful_runs() const {
    return static_cast<std::size_t>(std::count_if(runs.begin(), runs.end(), [](const RunResult& r) { return r.ok; }));
}

BenchmarkReport run_benchmark(const LatentProblem& p, const EngineConfig& cfg, const std::vector<std::uint64_t>& seeds,
                              const BenchmarkOptions& options) {
    if (seeds.empty()) throw ConfigError("run_benchmark needs at least one seed");
    BenchmarkReport report;
    report.problem = p.name;
    report.config = cfg;
    report.config.resolve();
    report.noise = options.noise;
    report.runs.resize(seeds.size());

    auto one_run = [&](std::size_t k) {
        RunResult& r = report.runs[k];
        r.seed = seeds[k];
        const double start = thread_cpu_seconds();
        try {
            EngineConfig run_cfg = cfg;
            run_cfg.seed = seeds[k];
            Session s = make_session(p, run_cfg);
            PreferenceOracle oracle = noisy_preference_oracle(p.f, options.noise, mix64(seeds[k] + 1));
            r.best_values.push_back(p.f(s.best()));
            std::size_t last_best = s.best_index();
            while (s.phase() != Phase::Done) {
                const QueryPair q = s.ask();
                s.tell(oracle(q.incumbent, q.challenger));
                if (s.best_index() != last_best) {
                    r.best_values.push_back(p.f(s.best()));
                    last_best = s.best_index();
                } else {
                    r.best_values.push_back(r.best_values.back());
                }
            }
            r.best_x = s.best();
        } catch (const std::exception& e) {
            r.ok = false;
            r.error = e.what();
        }
        r.cpu_seconds = thread_cpu_seconds() - start;
    };

    const std::size_t threads = std::max<std::size_t>(1, std::min(options.threads, seeds.size()));
    if (threads == 1) {
        for (std::size_t k = 0; k < seeds.size(); ++k) one_run(k);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back([&]() {
                for (std::size_t k = next++; k < seeds.size(); k = next++) one_run(k);
            });
        }
        for (auto& th : pool) th.join();
    }
    report.aggregate();
    return report;
}

void write_report(const BenchmarkReport& r, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / (r.problem + "_summary.csv"));
        out << "query_index,median,min,max\n";
        for (std::size_t k = 0; k < r.median.size(); ++k) {
            out << k << ',' << fmt(r.median[k]) << ',' << fmt(r.min[k]) << ',' << fmt(r.max[k]) << '\n';
        }
    }
    {
        std::ofstream out(dir / (r.problem + "_runs.csv"));
        out << "query_index";
        for (const auto& run : r.runs) out << ",seed_" << run.seed;
        out << '\n';
        for (std::size_t k = 0; k < r.median.size(); ++k) {
            out << k;
            for (const auto& run : r.runs) {
                out << ',';
                if (run.ok && k < run.best_values.size()) out << fmt(run.best_values[k]);
            }
            out << '\n';
        }
    }
    Json runs = Json::array();
    for (const auto& run : r.runs) {
        runs.push_back({{"seed", run.seed},
                        {"ok", run.ok},
                        {"error", run.error},
                        {"cpu_seconds", run.cpu_seconds},
                        {"best_x", run.ok ? vector_to_json(run.best_x) : Json()},
                        {"best_values", run.best_values}});
    }
    write_json_atomic(dir / (r.problem + "_report.json"), {{"problem", r.problem},
                                                           {"config", to_json(r.config)},
                                                           {"noise", r.noise},
                                                           {"median", r.median},
                                                           {"min", r.min},
                                                           {"max", r.max},
                                                           {"runs", runs}});
}

std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw Error("cannot read " + file.string());
    std::string line;
    std::getline(in, line);
    if (line != "query_index,median,min,max") throw InvalidValueError("unexpected CSV header in " + file.string());
    std::vector<SummaryRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell[4];
        for (auto& c : cell) std::getline(ss, c, ',');
        rows.push_back({std::stoul(cell[0]), std::stod(cell[1]), std::stod(cell[2]), std::stod(cell[3])});
    }
    return rows;
}

double random_search_best(const LatentProblem& p, std::size_t count, std::uint64_t seed) {
    const ScalingMap sm = ScalingMap::from_problem(p.problem.bounds, p.problem.constraints);
    CounterRng rng(seed);
    std::function<bool(const Vector&)> feasible;
    if (!p.problem.constraints.empty()) {
        feasible = [&](const Vector& xbar) { return feasible_point(p.problem, sm.from_unit(xbar)); };
    }
    const InitialDesign design = feasible_initial_design(count, sm.unit_dim(), feasible, rng);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& x : design.samples) best = std::min(best, p.f(sm.from_unit(x)));
    return best;
}

}  // namespace prefopt
