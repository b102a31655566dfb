#include "prefopt/service.hpp"

#include <httplib.h>

#include <cctype>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <random>

namespace prefopt {

namespace {

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string new_id() {
    static std::mutex mutex;
    static std::random_device device;
    std::lock_guard lock(mutex);
    std::uniform_int_distribution<std::uint64_t> dist;
    char buf[33];
    std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(dist(device)),
                  static_cast<unsigned long long>(dist(device)));
    return buf;
}

Json status_json(const Session& s) {
    return {{"best_index", s.best_index()},
            {"phase", to_string(s.phase())},
            {"queries_done", s.queries_done()},
            {"queries_remaining", s.queries_remaining()}};
}

}  // namespace

SessionManager::SessionManager(std::filesystem::path data_dir) : dir_(std::move(data_dir)) {
    std::filesystem::create_directories(dir_);
}

bool SessionManager::valid_id(const std::string& id) {
    if (id.empty() || id.size() > 64) return false;
    for (char c : id) {
        if (!std::isxdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

std::filesystem::path SessionManager::file_for(const std::string& id) const { return dir_ / (id + ".json"); }

std::shared_ptr<SessionManager::Entry> SessionManager::find(const std::string& id) {
    if (!valid_id(id)) throw ServiceError(404, "unknown session '" + id + "'");
    std::lock_guard lock(map_mutex_);
    if (auto it = sessions_.find(id); it != sessions_.end()) return it->second;
    const auto file = file_for(id);
    if (!std::filesystem::exists(file)) throw ServiceError(404, "unknown session '" + id + "'");
    const Json env = read_json_file(file);
    auto e = std::make_shared<Entry>();
    e->id = id;
    e->created = env.at("created").get<std::string>();
    e->updated = env.at("updated").get<std::string>();
    e->delivered = env.at("delivered").get<bool>();
    e->session = load_session(env.at("state"));
    sessions_[id] = e;
    return e;
}

void SessionManager::persist(Entry& e) {
    e.updated = utc_now();
    write_json_atomic(file_for(e.id), {{"id", e.id},
                                       {"protocol_version", kProtocolVersion},
                                       {"created", e.created},
                                       {"updated", e.updated},
                                       {"delivered", e.delivered},
                                       {"state", SessionCodec::encode(e.session)}});
}

Json SessionManager::create(const Json& request) {
    if (!request.is_object()) throw ServiceError(400, "request body must be a JSON object");
    auto e = std::make_shared<Entry>();
    try {
        EngineConfig cfg;
        if (request.contains("config")) cfg = config_from_json(request.at("config"));
        if (request.contains("problem")) {
            const auto name = request.at("problem").get<std::string>();
            if (!has_latent(name)) throw ServiceError(400, "unknown problem '" + name + "'");
            e->session = make_session(latent_suite(name), cfg);
        } else {
            if (!request.contains("bounds")) throw ServiceError(400, "missing 'bounds'");
            Problem p;
            p.bounds = bounds_from_json(request.at("bounds"));
            if (request.contains("linear") && !request.at("linear").is_null()) {
                p.constraints.linear = linear_from_json(request.at("linear"), p.bounds.dim());
            }
            e->session = Session::create(p, cfg);
        }
        // The first query is ready before the client asks for it.
        e->session.ask();
    } catch (const ServiceError&) {
        throw;
    } catch (const InfeasibleError& ex) {
        throw ServiceError(422, ex.what());
    } catch (const Error& ex) {
        throw ServiceError(400, ex.what());
    } catch (const nlohmann::json::exception& ex) {
        throw ServiceError(400, std::string("invalid request: ") + ex.what());
    }
    e->id = new_id();
    e->created = utc_now();
    std::lock_guard entry_lock(e->mutex);
    persist(*e);
    {
        std::lock_guard lock(map_mutex_);
        sessions_[e->id] = e;
    }
    return {{"id", e->id},
            {"query_available", e->session.has_pending()},
            {"queries_remaining", e->session.queries_remaining()}};
}

Json SessionManager::query(const std::string& id) {
    auto e = find(id);
    std::lock_guard lock(e->mutex);
    if (e->session.phase() == Phase::Done) throw ServiceError(409, "session is done");
    const bool computed = !e->session.has_pending();
    Json q = to_json(e->session.ask());
    if (computed || !e->delivered) {
        e->delivered = true;
        persist(*e);
    }
    return q;
}

Json SessionManager::preference(const std::string& id, const Json& body) {
    auto e = find(id);
    if (!body.is_object() || !body.contains("outcome") || !body.at("outcome").is_number_integer()) {
        throw ServiceError(400, "body must be {\"outcome\": -1|0|1}");
    }
    const int v = body.at("outcome").get<int>();
    if (v < -1 || v > 1) throw ServiceError(400, "outcome must be -1, 0 or 1");
    std::lock_guard lock(e->mutex);
    if (e->session.phase() == Phase::Done) throw ServiceError(409, "session is done");
    if (!e->session.has_pending() || !e->delivered) throw ServiceError(409, "no pending query to answer");
    e->session.tell(preference_from_int(v));
    e->delivered = false;
    if (e->session.phase() != Phase::Done) e->session.ask();
    persist(*e);
    return status_json(e->session);
}

Json SessionManager::best(const std::string& id) {
    auto e = find(id);
    std::lock_guard lock(e->mutex);
    const Session& s = e->session;
    Json out = status_json(s);
    out["best"] = vector_to_json(s.best());
    const auto& payload = s.payloads()[s.best_index()];
    out["payload"] = payload ? vector_to_json(*payload) : Json();
    return out;
}

Json SessionManager::history(const std::string& id) {
    auto e = find(id);
    std::lock_guard lock(e->mutex);
    const Session& s = e->session;
    Json entries = Json::array();
    for (std::size_t h = 0; h < s.preferences().size(); ++h) {
        const auto& r = s.preferences()[h];
        Json item = to_json(r);
        item["query_index"] = h + 1;
        item["left"] = vector_to_json(s.sample(r.left));
        item["right"] = vector_to_json(s.sample(r.right));
        item["best_index"] = s.best_trace()[h];
        entries.push_back(item);
    }
    Json out = status_json(s);
    out["n_max"] = s.config().n_max;
    out["history"] = entries;
    out["best_trace"] = s.best_trace();
    out["best"] = vector_to_json(s.best());
    return out;
}

void SessionManager::remove(const std::string& id) {
    auto e = find(id);
    std::lock_guard entry_lock(e->mutex);
    std::lock_guard lock(map_mutex_);
    std::filesystem::remove(file_for(id));
    sessions_.erase(id);
}

void install_routes(httplib::Server& server, SessionManager& manager) {
    auto reply = [](httplib::Response& res, int status, const Json& body) {
        res.status = status;
        res.set_content(body.dump(), "application/json");
    };
    auto guarded = [reply](auto fn) {
        return [reply, fn](const httplib::Request& req, httplib::Response& res) {
            try {
                fn(req, res);
            } catch (const ServiceError& e) {
                reply(res, e.status(), {{"error", e.what()}});
            } catch (const nlohmann::json::exception& e) {
                reply(res, 400, {{"error", std::string("malformed JSON: ") + e.what()}});
            } catch (const std::exception& e) {
                reply(res, 500, {{"error", e.what()}});
            }
        };
    };
    const std::string id = R"(/sessions/([^/]+))";

    server.Post("/sessions", guarded([&, reply](const httplib::Request& req, httplib::Response& res) {
                    reply(res, 201, manager.create(Json::parse(req.body)));
                }));
    server.Get(id + "/query", guarded([&, reply](const httplib::Request& req, httplib::Response& res) {
                   reply(res, 200, manager.query(req.matches[1]));
               }));
    server.Post(id + "/preference", guarded([&, reply](const httplib::Request& req, httplib::Response& res) {
                    reply(res, 200, manager.preference(req.matches[1], Json::parse(req.body)));
                }));
    server.Get(id + "/best", guarded([&, reply](const httplib::Request& req, httplib::Response& res) {
                   reply(res, 200, manager.best(req.matches[1]));
               }));
    server.Get(id + "/history", guarded([&, reply](const httplib::Request& req, httplib::Response& res) {
                   reply(res, 200, manager.history(req.matches[1]));
               }));
    server.Delete(id, guarded([&](const httplib::Request& req, httplib::Response& res) {
                      manager.remove(req.matches[1]);
                      res.status = 204;
                  }));
    // The browser console is served from another origin during development.
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
    server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.status = 204;
    });
}

void serve(const std::string& host, int port, const std::filesystem::path& data_dir) {
    SessionManager manager(data_dir);
    httplib::Server server;
    install_routes(server, manager);
    if (!server.listen(host, port)) throw Error("cannot listen on " + host + ":" + std::to_string(port));
}

}  // namespace prefopt
