#include "codedet/scorer.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <thread>

namespace codedet {

using nlohmann::json;

json ModelBundle::to_json() const {
    json j;
    j["format"] = "codedet-model";
    j["version"] = 1;
    j["task"] = std::string(to_string(task));
    j["vocabulary"] = vocab.to_json();
    j["model"] = model.to_json();
    return j;
}

ModelBundle ModelBundle::from_json(const json& j) {
    if (!j.is_object() || j.value("format", "") != "codedet-model" ||
        j.value("version", 0) != 1) {
        throw std::runtime_error("not a codedet model file");
    }
    ModelBundle bundle;
    bundle.task = task_from_string(j.at("task").get<std::string>());
    bundle.vocab = Vocabulary::from_json(j.at("vocabulary"));
    bundle.model = LinearModel::from_json(j.at("model"));
    if (bundle.model.vocab_hash != bundle.vocab.content_hash()) {
        throw std::runtime_error("model file vocabulary hash mismatch");
    }
    return bundle;
}

void ModelBundle::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write model file: " + path);
    out << to_json().dump() << '\n';
}

ModelBundle ModelBundle::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    json j;
    in >> j;
    return from_json(j);
}

NativeLinearScorer::NativeLinearScorer(ModelBundle bundle) : bundle_(std::move(bundle)) {
    if (bundle_.model.vocab_hash != bundle_.vocab.content_hash()) {
        throw std::runtime_error("model was trained against a different vocabulary");
    }
}

std::unordered_map<std::string, std::vector<double>> NativeLinearScorer::score_batch(
    std::span<const std::pair<std::string, std::string>> requests) {
    std::unordered_map<std::string, std::vector<double>> out;
    out.reserve(requests.size());
    for (const auto& [uid, text] : requests) {
        const SparseVector sv = transform(text, bundle_.vocab);
        out[uid] = predict_proba(bundle_.model, sv);
    }
    return out;
}

namespace {

void write_all(int fd, const char* data, std::size_t n) {
    std::size_t written = 0;
    while (written < n) {
        const ssize_t rc = ::write(fd, data + written, n - written);
        if (rc < 0) {
            if (errno == EINTR) continue;
            throw ProtocolError("scorer protocol: write to child failed: " +
                                std::string(std::strerror(errno)));
        }
        written += static_cast<std::size_t>(rc);
    }
}

}  // namespace

ExternalScorer::ExternalScorer(std::string command, std::size_t classes)
    : command_(std::move(command)), classes_(classes) {
    if (classes_ < 2) throw std::invalid_argument("ExternalScorer: need at least 2 classes");

    int to_child[2] = {-1, -1};
    int from_child[2] = {-1, -1};
    if (::pipe(to_child) != 0 || ::pipe(from_child) != 0) {
        throw ProtocolError("scorer protocol: pipe() failed");
    }

    const pid_t pid = ::fork();
    if (pid < 0) throw ProtocolError("scorer protocol: fork() failed");
    if (pid == 0) {
        ::dup2(to_child[0], STDIN_FILENO);
        ::dup2(from_child[1], STDOUT_FILENO);
        ::close(to_child[0]);
        ::close(to_child[1]);
        ::close(from_child[0]);
        ::close(from_child[1]);
        ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
        ::_exit(127);
    }

    child_pid_ = pid;
    to_child_ = to_child[1];
    from_child_ = from_child[0];
    ::close(to_child[0]);
    ::close(from_child[1]);

    // Handshake.
    json hello;
    hello["v"] = 1;
    hello["classes"] = classes_;
    const std::string line = hello.dump() + "\n";
    try {
        write_all(to_child_, line.data(), line.size());
    } catch (const ProtocolError&) {
        shutdown();
        throw;
    }
    std::string reply;
    try {
        reply = read_line();
    } catch (const ProtocolError&) {
        shutdown();
        throw;
    }
    json ok;
    try {
        ok = json::parse(reply);
    } catch (const json::exception&) {
        shutdown();
        throw ProtocolError("scorer protocol: malformed handshake reply: " + reply);
    }
    if (!ok.is_object() || ok.value("ok", false) != true) {
        shutdown();
        throw ProtocolError("scorer protocol: scorer did not acknowledge handshake: " + reply);
    }
}

ExternalScorer::~ExternalScorer() { shutdown(); }

void ExternalScorer::shutdown() noexcept {
    if (to_child_ >= 0) {
        ::close(to_child_);
        to_child_ = -1;
    }
    if (from_child_ >= 0) {
        ::close(from_child_);
        from_child_ = -1;
    }
    if (child_pid_ > 0) {
        int status = 0;
        // Give the child a moment to exit on stream close, then force it.
        for (int i = 0; i < 50; ++i) {
            const pid_t rc = ::waitpid(child_pid_, &status, WNOHANG);
            if (rc == child_pid_ || rc < 0) {
                child_pid_ = -1;
                return;
            }
            ::usleep(100 * 1000);
        }
        ::kill(child_pid_, SIGKILL);
        ::waitpid(child_pid_, &status, 0);
        child_pid_ = -1;
    }
}

std::string ExternalScorer::read_line() {
    for (;;) {
        const std::size_t newline = read_buffer_.find('\n');
        if (newline != std::string::npos) {
            std::string line = read_buffer_.substr(0, newline);
            read_buffer_.erase(0, newline + 1);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            return line;
        }
        char chunk[4096];
        const ssize_t rc = ::read(from_child_, chunk, sizeof(chunk));
        if (rc < 0) {
            if (errno == EINTR) continue;
            throw ProtocolError("scorer protocol: read from child failed: " +
                                std::string(std::strerror(errno)));
        }
        if (rc == 0) {
            throw ProtocolError("scorer protocol: scorer process closed its stream");
        }
        read_buffer_.append(chunk, static_cast<std::size_t>(rc));
    }
}

std::unordered_map<std::string, std::vector<double>> ExternalScorer::score_batch(
    std::span<const std::pair<std::string, std::string>> requests) {
    if (requests.empty()) return {};
    if (to_child_ < 0 || from_child_ < 0) {
        throw ProtocolError("scorer protocol: scorer is no longer usable after an error");
    }

    // Feed requests from a separate thread so a child that replies while we
    // are still writing cannot deadlock either pipe.
    std::string payload;
    for (const auto& [uid, text] : requests) {
        json line;
        line["uid"] = uid;
        line["text"] = text;
        payload += line.dump();
        payload += '\n';
    }
    payload += '\n';  // end of batch

    std::exception_ptr write_error;
    std::thread writer([&] {
        try {
            write_all(to_child_, payload.data(), payload.size());
        } catch (...) {
            write_error = std::current_exception();
        }
    });

    // On any protocol violation: close the child's stdin so the writer can
    // never stay blocked on a full pipe, join it, then report.
    auto abort_batch = [&](const std::string& message) {
        if (to_child_ >= 0) {
            ::close(to_child_);
            to_child_ = -1;
        }
        writer.join();
        throw ProtocolError("scorer protocol: " + message);
    };

    std::unordered_map<std::string, std::vector<double>> out;
    out.reserve(requests.size());
    std::unordered_map<std::string, bool> expected;
    expected.reserve(requests.size());
    for (const auto& [uid, text] : requests) expected.emplace(uid, false);

    std::size_t received = 0;
    bool saw_end_blank = false;
    while (received < requests.size() || !saw_end_blank) {
        std::string line;
        try {
            line = read_line();
        } catch (const ProtocolError& e) {
            abort_batch(std::string("process exit before batch completed (") + e.what() + ")");
        }
        if (line.empty()) {
            if (received == requests.size()) {
                saw_end_blank = true;
                continue;
            }
            for (const auto& [uid, seen] : expected) {
                if (!seen) abort_batch("missing response for uid '" + uid + "'");
            }
        }

        json response;
        try {
            response = json::parse(line);
        } catch (const json::exception&) {
            abort_batch("malformed response line: " + line);
        }
        if (!response.is_object() || !response.contains("uid") || !response.contains("probs")) {
            abort_batch("response missing uid/probs: " + line);
        }
        const std::string uid = response.at("uid").is_string()
                                    ? response.at("uid").get<std::string>()
                                    : response.at("uid").dump();
        const auto it = expected.find(uid);
        if (it == expected.end()) abort_batch("unexpected uid '" + uid + "'");
        if (it->second) abort_batch("duplicate response for uid '" + uid + "'");

        std::vector<double> probs;
        try {
            probs = response.at("probs").get<std::vector<double>>();
        } catch (const json::exception&) {
            abort_batch("non-numeric probabilities for uid '" + uid + "'");
        }
        if (probs.size() != classes_) {
            abort_batch("uid '" + uid + "' returned " + std::to_string(probs.size()) +
                        " probabilities, expected " + std::to_string(classes_));
        }
        double sum = 0.0;
        for (double p : probs) {
            if (!std::isfinite(p) || p < 0.0) {
                abort_batch("uid '" + uid + "' returned an invalid probability");
            }
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-6) {
            abort_batch("probabilities for uid '" + uid + "' sum to " + std::to_string(sum));
        }

        it->second = true;
        out.emplace(uid, std::move(probs));
        ++received;
    }

    writer.join();
    if (write_error) std::rethrow_exception(write_error);
    return out;
}

}  // namespace codedet
