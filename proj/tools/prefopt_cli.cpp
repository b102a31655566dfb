#include "prefopt/bench.hpp"
#include "prefopt/service.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace prefopt;

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string show(const Vector& x) {
    std::ostringstream os;
    os << std::setprecision(6) << '[';
    for (Eigen::Index i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
    os << ']';
    return os.str();
}

std::vector<double> parse_numbers(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(cell, &used));
            if (used != cell.size()) throw std::invalid_argument(cell);
        } catch (const std::exception&) {
            throw UsageError("not a number: '" + cell + "'");
        }
    }
    return out;
}

LatentProblem named_problem(const std::string& name) {
    if (!has_latent(name)) throw UsageError("unknown problem '" + name + "'");
    return latent_suite(name);
}

struct BenchArgs {
    std::string problem;
    std::size_t runs = 20;
    std::size_t n_max = 25;
    std::size_t n_init = 0;
    std::uint64_t seed = 0;
    std::string acq = "idw";
    std::string out = "results";
    double noise = 0.0;
    std::size_t threads = 1;
};

int run_bench(const BenchArgs& a) {
    const LatentProblem p = named_problem(a.problem);
    EngineConfig cfg;
    cfg.n_max = a.n_max;
    cfg.n_init = a.n_init;
    cfg.acquisition.criterion = acquisition_from_string(a.acq);
    std::vector<std::uint64_t> seeds;
    for (std::size_t k = 0; k < a.runs; ++k) seeds.push_back(a.seed + k);
    const BenchmarkReport r = run_benchmark(p, cfg, seeds, {a.noise, a.threads});
    write_report(r, a.out);
    std::cout << p.name << ": " << r.successful_runs() << "/" << r.runs.size() << " runs, final median "
              << r.median.back() << " [" << r.min.back() << ", " << r.max.back() << "]\n";
    for (const auto& run : r.runs) {
        if (!run.ok) std::cerr << "seed " << run.seed << " failed: " << run.error << '\n';
    }
    return r.successful_runs() == r.runs.size() ? 0 : 1;
}

struct InteractiveArgs {
    std::size_t dim = 0;
    std::string bounds;
    std::size_t n_max = 20;
    std::string acq = "idw";
    std::uint64_t seed = 0;
};

int run_interactive(const InteractiveArgs& a, std::istream& in, std::ostream& out) {
    const std::vector<double> b = parse_numbers(a.bounds);
    if (a.dim == 0 || b.size() != 2 * a.dim) throw UsageError("--bounds needs 2*dim numbers: l1,u1,l2,u2,...");
    Problem p;
    p.bounds.lower.resize(static_cast<Eigen::Index>(a.dim));
    p.bounds.upper.resize(static_cast<Eigen::Index>(a.dim));
    for (std::size_t i = 0; i < a.dim; ++i) {
        p.bounds.lower[static_cast<Eigen::Index>(i)] = b[2 * i];
        p.bounds.upper[static_cast<Eigen::Index>(i)] = b[2 * i + 1];
    }
    EngineConfig cfg;
    cfg.n_max = a.n_max;
    cfg.seed = a.seed;
    cfg.acquisition.criterion = acquisition_from_string(a.acq);
    Session s = Session::create(p, cfg);
    out << "Answer l (left better), e (equivalent) or r (right better).\n";
    while (s.phase() != Phase::Done) {
        const QueryPair q = s.ask();
        out << "query " << q.query_index << "/" << cfg.n_max - 1 << "\n  left:  " << show(q.incumbent)
            << "\n  right: " << show(q.challenger) << "\n> " << std::flush;
        std::string line;
        Preference answer;
        for (;;) {
            if (!std::getline(in, line)) throw Error("input ended before the session finished");
            if (line == "l") {
                answer = Preference::FirstBetter;
            } else if (line == "e") {
                answer = Preference::Tie;
            } else if (line == "r") {
                answer = Preference::SecondBetter;
            } else {
                out << "please type l, e or r\n> " << std::flush;
                continue;
            }
            break;
        }
        s.tell(answer);
    }
    out << "best: " << show(s.best()) << '\n';
    return 0;
}

struct OracleArgs {
    std::string problem;
    std::size_t n_max = 25;
    std::uint64_t seed = 0;
    std::string acq = "idw";
};

int run_oracle(const OracleArgs& a) {
    const LatentProblem p = named_problem(a.problem);
    EngineConfig cfg;
    cfg.n_max = a.n_max;
    cfg.seed = a.seed;
    cfg.acquisition.criterion = acquisition_from_string(a.acq);
    Session s = make_session(p, cfg);
    const auto trace = run_auto(s, noisy_preference_oracle(p.f, 0.0, a.seed));
    std::cout << "query,best_index,latent\n";
    for (const auto& t : trace) {
        std::cout << t.query_count << ',' << t.best_index << ',' << std::setprecision(10) << p.f(s.sample(t.best_index))
                  << '\n';
    }
    std::cout << "best: " << show(s.best()) << " f = " << p.f(s.best()) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Preference-based global optimization"};
    app.require_subcommand(1);

    BenchArgs bench;
    auto* b = app.add_subcommand("bench", "Run a synthetic benchmark over several seeds");
    b->add_option("problem", bench.problem, "Problem name")->required();
    b->add_option("--runs", bench.runs, "Number of seeds")->check(CLI::PositiveNumber);
    b->add_option("--nmax", bench.n_max, "Samples per run")->check(CLI::Range(2, 100000));
    b->add_option("--ninit", bench.n_init, "Initial samples (default ceil(nmax/3))");
    b->add_option("--seed", bench.seed, "First seed");
    b->add_option("--acq", bench.acq, "Acquisition")->check(CLI::IsMember({"idw", "pi"}));
    b->add_option("--out", bench.out, "Output directory");
    b->add_option("--noise", bench.noise, "Preference noise amplitude")->check(CLI::NonNegativeNumber);
    b->add_option("--threads", bench.threads, "Concurrent runs")->check(CLI::PositiveNumber);

    InteractiveArgs inter;
    auto* i = app.add_subcommand("interactive", "Answer preference queries in the terminal");
    i->add_option("--dim", inter.dim, "Number of variables")->required()->check(CLI::PositiveNumber);
    i->add_option("--bounds", inter.bounds, "l1,u1,l2,u2,...")->required();
    i->add_option("--nmax", inter.n_max, "Samples")->check(CLI::Range(2, 100000));
    i->add_option("--acq", inter.acq, "Acquisition")->check(CLI::IsMember({"idw", "pi"}));
    i->add_option("--seed", inter.seed, "Seed");

    int port = 8080;
    std::string host = "127.0.0.1";
    std::string data_dir;
    auto* sv = app.add_subcommand("serve", "Start the HTTP session service");
    sv->add_option("--port", port, "Port")->envname("PREFOPT_PORT")->check(CLI::Range(1, 65535));
    sv->add_option("--host", host, "Bind address");
    sv->add_option("--data-dir", data_dir, "Session directory")->envname("PREFOPT_DATA_DIR");

    OracleArgs oracle;
    auto* o = app.add_subcommand("oracle-run", "Single synthetic run with its trace");
    o->add_option("--problem", oracle.problem, "Problem name")->required();
    o->add_option("--nmax", oracle.n_max, "Samples")->check(CLI::Range(2, 100000));
    o->add_option("--seed", oracle.seed, "Seed");
    o->add_option("--acq", oracle.acq, "Acquisition")->check(CLI::IsMember({"idw", "pi"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*b) return run_bench(bench);
        if (*i) return run_interactive(inter, std::cin, std::cout);
        if (*sv) {
            if (data_dir.empty()) data_dir = "sessions";
            std::cout << "serving on http://" << host << ':' << port << " (data in " << data_dir << ")" << std::endl;
            serve(host, port, data_dir);
            return 0;
        }
        if (*o) return run_oracle(oracle);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
