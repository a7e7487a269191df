#include "xit/service/http_api.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <iterator>
#include <random>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "xit/core/error.hpp"
#include "xit/core/log.hpp"

namespace xit::service {
namespace {

using nlohmann::json;

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& code,
                const std::string& message) {
    send_json(res, status, {{"error", code}, {"message", message}});
}

json protocol_json() {
    return {{"practice_trials", kPracticeTrials}, {"test_trials", kTestTrials},
            {"class_count", kClassCount},         {"confidence_min", kConfidenceMin},
            {"confidence_max", kConfidenceMax},   {"rest_every", kRestEvery},
            {"confirmation_ms", kConfirmationMs}};
}

int parse_index(const std::string& text) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ServiceError(400, "validation", "invalid trial index '" + text + "'");
    }
    return value;
}

json parse_body(const httplib::Request& req) {
    try {
        json body = json::parse(req.body);
        if (!body.is_object()) throw ServiceError(400, "validation", "body must be a JSON object");
        return body;
    } catch (const json::parse_error& e) {
        throw ServiceError(400, "validation", std::string("malformed JSON: ") + e.what());
    }
}

template <class Fn>
httplib::Server::Handler guarded(Fn fn) {
    return [fn](const httplib::Request& req, httplib::Response& res) {
        try {
            fn(req, res);
        } catch (const ServiceError& e) {
            send_error(res, e.status(), e.code(), e.what());
        } catch (const json::exception& e) {
            send_error(res, 400, "validation", e.what());
        } catch (const InvalidArgument& e) {
            send_error(res, 400, "validation", e.what());
        } catch (const std::exception& e) {
            std::cerr << "request " << req.method << ' ' << req.path << " failed: " << e.what()
                      << '\n';
            send_error(res, 500, "internal", e.what());
        }
    };
}

}  // namespace

struct HttpApi::Impl {
    StudyService& service;
    httplib::Server server;
    int port = 0;

    explicit Impl(StudyService& s) : service(s) {}

    void routes() {
        server.Post("/v1/sessions", guarded([this](const auto& req, auto& res) {
            const json body = parse_body(req);
            if (!body.contains("participant_id") || !body["participant_id"].is_string()) {
                throw ServiceError(400, "validation", "participant_id (string) is required");
            }
            std::uint64_t seed = 0;
            if (body.contains("seed") && !body["seed"].is_null()) {
                seed = body["seed"].template get<std::uint64_t>();
            } else {
                std::random_device rd;
                seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
            }
            const auto state =
                service.create_session(body["participant_id"].template get<std::string>(), seed);
            send_json(res, 201,
                      {{"session_id", state->session_id},
                       {"participant_id", state->participant_id},
                       {"seed", state->seed},
                       {"created_at", state->created_at},
                       {"next_index", state->cursor()},
                       {"phase", phase_name(state->phase())},
                       {"protocol", protocol_json()}});
        }));

        server.Get(R"(/v1/sessions/([^/]+))", guarded([this](const auto& req, auto& res) {
            const auto state = service.session(req.matches[1]);
            send_json(res, 200,
                      {{"session_id", state->session_id},
                       {"participant_id", state->participant_id},
                       {"next_index", state->cursor()},
                       {"phase", phase_name(state->phase())},
                       {"protocol", protocol_json()}});
        }));

        server.Get(R"(/v1/sessions/([^/]+)/trials/(-?\d+))",
                   guarded([this](const auto& req, auto& res) {
                       const TrialView v = service.get_trial(req.matches[1], parse_index(req.matches[2]));
                       send_json(res, 200,
                                 {{"session_id", v.session_id},
                                  {"trial_index", v.trial_index},
                                  {"phase", phase_name(v.phase)},
                                  {"phase_index", v.phase_index},
                                  {"image_ref", v.image_ref},
                                  {"image_url", "/v1/images/" + v.image_ref},
                                  {"class_options", v.class_options},
                                  {"show_rest", v.show_rest},
                                  {"instructions", v.instructions},
                                  {"protocol", protocol_json()}});
                   }));

        server.Post(R"(/v1/sessions/([^/]+)/trials/(-?\d+)/response)",
                    guarded([this](const auto& req, auto& res) {
                        const json body = parse_body(req);
                        ResponseInput input;
                        if (!body.contains("choice") || !body["choice"].is_string()) {
                            throw ServiceError(400, "validation", "choice (string) is required");
                        }
                        if (!body.contains("confidence") || !body["confidence"].is_number_integer()) {
                            throw ServiceError(400, "validation",
                                               "confidence (integer 1..5) is required");
                        }
                        input.choice = body["choice"].template get<std::string>();
                        input.confidence = body["confidence"].template get<int>();
                        if (body.contains("rt_ms") && body["rt_ms"].is_number()) {
                            input.rt_ms = body["rt_ms"].template get<double>();
                        }
                        const Ack ack = service.submit_response(req.matches[1],
                                                                parse_index(req.matches[2]), input);
                        json out = {{"trial_index", ack.trial_index},
                                    {"phase", phase_name(ack.phase)},
                                    {"next_phase", phase_name(ack.next_phase)}};
                        out["next_index"] =
                            ack.next_index ? json(*ack.next_index) : json(nullptr);
                        if (ack.feedback) out["feedback"] = *ack.feedback;
                        send_json(res, 200, out);
                    }));

        server.Get(R"(/v1/images/([^/]+))", guarded([this](const auto& req, auto& res) {
            const auto path = service.image_path(req.matches[1]);
            std::ifstream in(path, std::ios::binary);
            if (!in) throw ServiceError(404, "not_found", "image file missing: " + path.string());
            std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
            res.status = 200;
            res.set_content(std::move(bytes), "image/png");
        }));

        server.Get("/v1/export.csv", guarded([this](const auto& req, auto& res) {
            res.status = 200;
            res.set_content(service.export_csv(req.get_param_value("participant"),
                                               req.get_param_value("session")),
                            "text/csv");
        }));

        server.Get("/v1/health", [](const httplib::Request&, httplib::Response& res) {
            send_json(res, 200, {{"status", "ok"}});
        });
    }
};

HttpApi::HttpApi(StudyService& service, std::filesystem::path static_dir)
    : impl_(std::make_unique<Impl>(service)) {
    impl_->routes();
    if (!static_dir.empty() && !impl_->server.set_mount_point("/", static_dir.string())) {
        throw IoError("static directory not found: " + static_dir.string());
    }
}

HttpApi::~HttpApi() { stop(); }

int HttpApi::bind(const std::string& host, int port) {
    if (port == 0) {
        impl_->port = impl_->server.bind_to_any_port(host);
    } else {
        impl_->port = impl_->server.bind_to_port(host, port) ? port : -1;
    }
    if (impl_->port < 0) throw IoError("cannot bind " + host + ":" + std::to_string(port));
    return impl_->port;
}

void HttpApi::listen() { impl_->server.listen_after_bind(); }

void HttpApi::stop() {
    if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

bool HttpApi::running() const { return impl_->server.is_running(); }

void HttpApi::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace xit::service
