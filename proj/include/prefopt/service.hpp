#pragma once

#include "prefopt/bench.hpp"
#include "prefopt/codec.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace httplib {
class Server;
}

namespace prefopt {

inline constexpr int kProtocolVersion = 1;

/// Request failure carrying the HTTP status it maps to.
class ServiceError : public Error {
public:
    ServiceError(int status, const std::string& msg) : Error(msg), status_(status) {}
    int status() const { return status_; }

private:
    int status_;
};

/// Owns the live sessions and their files under one data directory.
/// Every operation on a session holds that session's lock.
class SessionManager {
public:
    explicit SessionManager(std::filesystem::path data_dir);

    /// Body: {"bounds": {...}, "linear": {...}, "config": {...}} or {"problem": "<name>", "config": {...}}.
    /// Returns {"id", "query_available", "queries_remaining"}.
    Json create(const Json& request);
    Json query(const std::string& id);
    /// Body: {"outcome": -1|0|1}. Returns {"best_index", "phase", "queries_remaining"}.
    Json preference(const std::string& id, const Json& body);
    Json best(const std::string& id);
    Json history(const std::string& id);
    void remove(const std::string& id);

    const std::filesystem::path& data_dir() const { return dir_; }
    std::filesystem::path file_for(const std::string& id) const;

private:
    struct Entry {
        std::mutex mutex;
        Session session;
        std::string id;
        std::string created;
        std::string updated;
        /// Set once the pending pair has been served; a preference is accepted only then.
        bool delivered = false;
    };

    std::shared_ptr<Entry> find(const std::string& id);
    void persist(Entry& e);
    static bool valid_id(const std::string& id);

    std::filesystem::path dir_;
    std::mutex map_mutex_;
    std::map<std::string, std::shared_ptr<Entry>> sessions_;
};

/// Registers the REST routes on `server`.
void install_routes(httplib::Server& server, SessionManager& manager);

/// Blocks serving on host:port until the process is stopped.
void serve(const std::string& host, int port, const std::filesystem::path& data_dir);

}  // namespace prefopt
