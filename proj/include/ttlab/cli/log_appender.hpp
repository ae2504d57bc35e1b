#pragma once

#include <condition_variable>
#include <cstddef>
#include <deque>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <thread>

namespace ttlab::cli {

/// Writes text records to files on a background thread. `append` blocks
/// while `capacity` records are already queued.
class LogAppender {
public:
    explicit LogAppender(std::size_t capacity = 1024);
    ~LogAppender();
    LogAppender(const LogAppender&) = delete;
    LogAppender& operator=(const LogAppender&) = delete;

    void append(const std::filesystem::path& file, std::string text);
    /// Waits until everything queued so far is on disk. Rethrows a write failure.
    void flush();

    std::size_t capacity() const { return capacity_; }
    std::size_t high_water() const;

private:
    struct Record {
        std::filesystem::path file;
        std::string text;
    };
    void run();

    const std::size_t capacity_;
    mutable std::mutex mutex_;
    std::condition_variable not_full_, not_empty_, drained_;
    std::deque<Record> queue_;
    std::size_t high_water_ = 0;
    bool busy_ = false;
    bool stopping_ = false;
    std::string error_;
    std::filesystem::path open_path_;
    std::ofstream open_file_;
    std::jthread worker_;
};

}  // namespace ttlab::cli
