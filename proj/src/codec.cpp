#include "prefopt/codec.hpp"

#include <fstream>
#include <sstream>

namespace prefopt {

namespace {

Json optional_vector(const std::optional<Vector>& v) { return v ? vector_to_json(*v) : Json(nullptr); }

std::optional<Vector> optional_vector_from(const Json& j) {
    if (j.is_null()) return std::nullopt;
    return vector_from_json(j);
}

template <typename T>
void read_if(const Json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

Json vector_to_json(const Vector& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

Vector vector_from_json(const Json& j) {
    if (!j.is_array()) throw InvalidValueError("expected an array of numbers");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw InvalidValueError("expected an array of numbers");
        v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    }
    return v;
}

Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(vector_to_json(m.row(r).transpose()));
    return rows;
}

Matrix matrix_from_json(const Json& j, Eigen::Index cols_if_empty) {
    if (!j.is_array()) throw InvalidValueError("expected an array of rows");
    if (j.empty()) return Matrix(0, cols_if_empty);
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    Matrix m(static_cast<Eigen::Index>(j.size()), cols);
    for (std::size_t r = 0; r < j.size(); ++r) {
        Vector row = vector_from_json(j[r]);
        if (row.size() != cols) throw DimensionError("ragged matrix rows");
        m.row(static_cast<Eigen::Index>(r)) = row.transpose();
    }
    return m;
}

Json to_json(const BoxBounds& b) { return {{"lower", vector_to_json(b.lower)}, {"upper", vector_to_json(b.upper)}}; }

BoxBounds bounds_from_json(const Json& j) {
    BoxBounds b{vector_from_json(j.at("lower")), vector_from_json(j.at("upper"))};
    if (b.lower.size() != b.upper.size() || b.lower.size() == 0) throw DimensionError("bounds dimension mismatch");
    if (!b.lower.allFinite() || !b.upper.allFinite()) throw InvalidValueError("bounds must be finite");
    return b;
}

Json to_json(const LinearConstraints& lin) { return {{"A", matrix_to_json(lin.A)}, {"b", vector_to_json(lin.b)}}; }

LinearConstraints linear_from_json(const Json& j, std::size_t n) {
    LinearConstraints lin;
    lin.A = matrix_from_json(j.at("A"), static_cast<Eigen::Index>(n));
    lin.b = vector_from_json(j.at("b"));
    if (lin.A.rows() != lin.b.size()) throw DimensionError("constraint rows != rhs length");
    if (lin.A.rows() > 0 && static_cast<std::size_t>(lin.A.cols()) != n) throw DimensionError("constraint width");
    return lin;
}

Json to_json(const PreferenceRecord& p) {
    return {{"left_index", p.left}, {"right_index", p.right}, {"outcome", to_int(p.outcome)}};
}

PreferenceRecord preference_record_from_json(const Json& j) {
    return {j.at("left_index").get<std::size_t>(), j.at("right_index").get<std::size_t>(),
            preference_from_int(j.at("outcome").get<int>())};
}

Json to_json(const QueryPair& q) {
    return {{"incumbent", vector_to_json(q.incumbent)},
            {"challenger", vector_to_json(q.challenger)},
            {"incumbent_index", q.incumbent_index},
            {"challenger_index", q.challenger_index},
            {"query_index", q.query_index},
            {"challenger_feasible", q.challenger_feasible},
            {"incumbent_payload", optional_vector(q.incumbent_payload)},
            {"challenger_payload", optional_vector(q.challenger_payload)}};
}

Json to_json(const RBFSurrogate& s) {
    Json samples = Json::array();
    for (const auto& x : s.samples()) samples.push_back(vector_to_json(x));
    return {{"kernel", to_string(s.kernel())},
            {"epsilon", s.epsilon()},
            {"beta", vector_to_json(s.beta())},
            {"samples", samples}};
}

RBFSurrogate surrogate_from_json(const Json& j) {
    std::vector<Vector> pts;
    for (const auto& x : j.at("samples")) pts.push_back(vector_from_json(x));
    const std::size_t dim = pts.empty() ? 0 : static_cast<std::size_t>(pts[0].size());
    return RBFSurrogate(SampleSet(dim, pts), vector_from_json(j.at("beta")), j.at("epsilon").get<double>(),
                        kernel_from_string(j.at("kernel").get<std::string>()));
}

Json to_json(const EngineConfig& c) {
    Json schedule = Json::array();
    for (auto n : c.calibration.schedule) schedule.push_back(n);
    return {{"n_max", c.n_max},
            {"n_init", c.n_init},
            {"acquisition", to_string(c.acquisition.criterion)},
            {"delta", c.acquisition.delta},
            {"pi_exploration", c.acquisition.pi_exploration},
            {"loss_weights", {c.acquisition.weights.first_better, c.acquisition.weights.tie,
                              c.acquisition.weights.second_better}},
            {"sigma", c.sigma},
            {"lambda", c.lambda},
            {"kernel", to_string(c.kernel)},
            {"epsilon", c.epsilon},
            {"calibrate", c.calibrate},
            {"thetas", c.calibration.thetas},
            {"schedule", schedule},
            {"fold_policy", c.calibration.policy == FoldPolicy::LeaveOneOut ? "leave_one_out" : "k_fold"},
            {"folds", c.calibration.folds},
            {"pso",
             {{"swarm_size", c.pso.swarm_size},
              {"iterations", c.pso.iterations},
              {"inertia", c.pso.inertia},
              {"cognitive", c.pso.cognitive},
              {"social", c.pso.social},
              {"seed", c.pso.seed},
              {"stall_window", c.pso.stall_window},
              {"stall_tol", c.pso.stall_tol},
              {"polish_evals", c.pso.polish_evals}}},
            {"penalty_rho", c.penalty_rho},
            {"anchor_best", c.anchor_best},
            {"max_oversample", c.max_oversample},
            {"seed", c.seed}};
}

EngineConfig config_from_json(const Json& j, EngineConfig c) {
    if (!j.is_object()) throw InvalidValueError("config must be an object");
    try {
        read_if(j, "n_max", c.n_max);
        read_if(j, "n_init", c.n_init);
        if (j.contains("acquisition")) c.acquisition.criterion = acquisition_from_string(j.at("acquisition"));
        read_if(j, "delta", c.acquisition.delta);
        read_if(j, "pi_exploration", c.acquisition.pi_exploration);
        if (j.contains("loss_weights")) {
            const auto& w = j.at("loss_weights");
            if (!w.is_array() || w.size() != 3) throw InvalidValueError("loss_weights must have three entries");
            c.acquisition.weights = {w[0].get<double>(), w[1].get<double>(), w[2].get<double>()};
        }
        read_if(j, "sigma", c.sigma);
        read_if(j, "lambda", c.lambda);
        if (j.contains("kernel")) c.kernel = kernel_from_string(j.at("kernel"));
        read_if(j, "epsilon", c.epsilon);
        read_if(j, "calibrate", c.calibrate);
        read_if(j, "thetas", c.calibration.thetas);
        if (j.contains("schedule")) {
            c.calibration.schedule.clear();
            for (const auto& n : j.at("schedule")) c.calibration.schedule.insert(n.get<std::size_t>());
        }
        if (j.contains("fold_policy")) {
            const auto tag = j.at("fold_policy").get<std::string>();
            if (tag == "leave_one_out") {
                c.calibration.policy = FoldPolicy::LeaveOneOut;
            } else if (tag == "k_fold") {
                c.calibration.policy = FoldPolicy::KFold;
            } else {
                throw ConfigError("unknown fold policy '" + tag + "'");
            }
        }
        read_if(j, "folds", c.calibration.folds);
        if (j.contains("pso")) {
            const auto& p = j.at("pso");
            read_if(p, "swarm_size", c.pso.swarm_size);
            read_if(p, "iterations", c.pso.iterations);
            read_if(p, "inertia", c.pso.inertia);
            read_if(p, "cognitive", c.pso.cognitive);
            read_if(p, "social", c.pso.social);
            read_if(p, "seed", c.pso.seed);
            read_if(p, "stall_window", c.pso.stall_window);
            read_if(p, "stall_tol", c.pso.stall_tol);
            read_if(p, "polish_evals", c.pso.polish_evals);
        }
        read_if(j, "penalty_rho", c.penalty_rho);
        read_if(j, "anchor_best", c.anchor_best);
        read_if(j, "max_oversample", c.max_oversample);
        read_if(j, "seed", c.seed);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidValueError(std::string("invalid config: ") + e.what());
    }
    return c;
}

Json SessionCodec::encode(const Session& s) {
    auto sample_list = [](const SampleSet& set) {
        Json a = Json::array();
        for (const auto& x : set) a.push_back(vector_to_json(x));
        return a;
    };
    Json prefs = Json::array();
    for (const auto& p : s.prefs_) prefs.push_back(to_json(p));
    Json payloads = Json::array();
    for (const auto& p : s.payloads_) payloads.push_back(optional_vector(p));
    Json calib = Json::array();
    for (const auto& e : s.calibration_) {
        calib.push_back({{"n", e.n},
                         {"epsilon_before", e.epsilon_before},
                         {"epsilon_after", e.epsilon_after},
                         {"status", e.status},
                         {"correct", e.correct},
                         {"tested", e.tested}});
    }
    Json problem = {{"name", s.problem_.name},
                    {"bounds", to_json(s.problem_.bounds)},
                    {"linear", s.problem_.constraints.linear ? to_json(*s.problem_.constraints.linear) : Json()},
                    {"has_nonlinear", static_cast<bool>(s.problem_.constraints.nonlinear)},
                    {"has_payload", static_cast<bool>(s.payload_)}};
    Json pending = nullptr;
    if (s.pending_) {
        pending = {{"unit", vector_to_json(s.pending_->unit)},
                   {"feasible", s.pending_->feasible},
                   {"payload", optional_vector(s.pending_->payload)}};
    }
    return {{"format", kSessionFormat},
            {"version", kSessionVersion},
            {"rng", {{"algorithm", CounterRng::kAlgorithm}, {"seed", s.rng_.seed()}, {"counter", s.rng_.counter()}}},
            {"config", to_json(s.cfg_)},
            {"problem", problem},
            {"scaling", {{"lower", vector_to_json(s.scaling_.lower())}, {"upper", vector_to_json(s.scaling_.upper())}}},
            {"design", sample_list(s.design_)},
            {"design_all_feasible", s.design_feasible_},
            {"samples", sample_list(s.samples_)},
            {"payloads", payloads},
            {"preferences", prefs},
            {"best_index", s.best_},
            {"best_trace", s.best_trace_},
            {"phase", to_string(s.phase_)},
            {"epsilon", s.epsilon_},
            {"calibration_history", calib},
            {"pending", pending}};
}

Session SessionCodec::decode(const Json& j, NonlinearConstraint nonlinear, PayloadFunction payload) {
    try {
        if (j.at("format").get<std::string>() != kSessionFormat) throw InvalidValueError("not a session document");
        if (j.at("version").get<int>() != kSessionVersion) throw InvalidValueError("unsupported session version");
        if (j.at("rng").at("algorithm").get<std::string>() != CounterRng::kAlgorithm) {
            throw InvalidValueError("session was written with a different RNG algorithm");
        }
        Session s;
        s.cfg_ = config_from_json(j.at("config"));
        s.cfg_.resolve();
        const Json& pj = j.at("problem");
        s.problem_.name = pj.at("name").get<std::string>();
        s.problem_.bounds = bounds_from_json(pj.at("bounds"));
        if (!pj.at("linear").is_null()) s.problem_.constraints.linear = linear_from_json(pj.at("linear"), s.problem_.bounds.dim());
        if (pj.at("has_nonlinear").get<bool>() && !nonlinear) {
            throw ConfigError("session '" + s.problem_.name + "' needs its nonlinear constraints rebound");
        }
        s.problem_.constraints.nonlinear = std::move(nonlinear);
        s.payload_ = std::move(payload);
        s.scaling_ = ScalingMap(vector_from_json(j.at("scaling").at("lower")), vector_from_json(j.at("scaling").at("upper")));
        if (s.problem_.constraints.linear && s.problem_.constraints.linear->rows() > 0) {
            s.scaling_.unit_linear = rescale_polyhedron(*s.problem_.constraints.linear, s.scaling_);
        }
        const std::size_t dim = s.scaling_.unit_dim();
        s.design_ = SampleSet(dim);
        for (const auto& x : j.at("design")) s.design_.push_back(vector_from_json(x));
        s.design_feasible_ = j.at("design_all_feasible").get<bool>();
        s.samples_ = SampleSet(dim);
        for (const auto& x : j.at("samples")) s.samples_.push_back(vector_from_json(x));
        for (const auto& p : j.at("payloads")) s.payloads_.push_back(optional_vector_from(p));
        for (const auto& p : j.at("preferences")) s.prefs_.push_back(preference_record_from_json(p));
        validate_preferences(s.prefs_, s.samples_.size());
        s.best_ = j.at("best_index").get<std::size_t>();
        s.best_trace_ = j.at("best_trace").get<std::vector<std::size_t>>();
        s.phase_ = phase_from_string(j.at("phase").get<std::string>());
        s.epsilon_ = j.at("epsilon").get<double>();
        for (const auto& e : j.at("calibration_history")) {
            s.calibration_.push_back({e.at("n").get<std::size_t>(), e.at("epsilon_before").get<double>(),
                                      e.at("epsilon_after").get<double>(), e.at("status").get<std::string>(),
                                      e.at("correct").get<std::vector<std::size_t>>(), e.at("tested").get<std::size_t>()});
        }
        s.rng_ = CounterRng(j.at("rng").at("seed").get<std::uint64_t>(), j.at("rng").at("counter").get<std::uint64_t>());
        if (!j.at("pending").is_null()) {
            const Json& p = j.at("pending");
            s.pending_ = Session::Pending{vector_from_json(p.at("unit")), p.at("feasible").get<bool>(),
                                          optional_vector_from(p.at("payload"))};
        }
        if (s.samples_.empty() || s.best_ >= s.samples_.size() || s.payloads_.size() != s.samples_.size() ||
            s.prefs_.size() + 1 != s.samples_.size() || s.best_trace_.size() != s.prefs_.size()) {
            throw InvalidValueError("inconsistent session document");
        }
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidValueError(std::string("malformed session document: ") + e.what());
    }
}

void write_json_atomic(const std::filesystem::path& path, const Json& j) {
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp);
        out << j.dump(1) << '\n';
        out.flush();
        if (!out) throw Error("failed writing " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return Json::parse(ss.str());
    } catch (const nlohmann::json::exception& e) {
        throw InvalidValueError("malformed JSON in " + path.string() + ": " + e.what());
    }
}

}  // namespace prefopt
