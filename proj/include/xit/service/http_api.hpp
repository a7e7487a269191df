#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "xit/service/study_service.hpp"

namespace xit::service {

/// JSON API under /v1 on top of a StudyService. Optionally serves static
/// front-end assets from `static_dir` at "/".
class HttpApi {
public:
    explicit HttpApi(StudyService& service, std::filesystem::path static_dir = {});
    ~HttpApi();

    HttpApi(const HttpApi&) = delete;
    HttpApi& operator=(const HttpApi&) = delete;

    /// Binds to `port` (0 picks a free one) and returns the bound port.
    int bind(const std::string& host, int port);
    /// Serves until stop(); blocks.
    void listen();
    void stop();
    bool running() const;
    void wait_until_ready() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace xit::service
