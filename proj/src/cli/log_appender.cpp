#include "ttlab/cli/log_appender.hpp"

#include <algorithm>

#include "ttlab/core/errors.hpp"

namespace ttlab::cli {

LogAppender::LogAppender(std::size_t capacity) : capacity_(capacity == 0 ? 1 : capacity) {
    worker_ = std::jthread([this] { run(); });
}

LogAppender::~LogAppender() {
    {
        std::lock_guard lock(mutex_);
        stopping_ = true;
    }
    not_empty_.notify_all();
    worker_.join();
}

void LogAppender::append(const std::filesystem::path& file, std::string text) {
    std::unique_lock lock(mutex_);
    not_full_.wait(lock, [&] { return queue_.size() < capacity_ || !error_.empty(); });
    if (!error_.empty()) throw Error(error_);
    queue_.push_back({file, std::move(text)});
    high_water_ = std::max(high_water_, queue_.size());
    not_empty_.notify_one();
}

void LogAppender::flush() {
    std::unique_lock lock(mutex_);
    drained_.wait(lock, [&] { return (queue_.empty() && !busy_) || !error_.empty(); });
    if (!error_.empty()) throw Error(error_);
}

std::size_t LogAppender::high_water() const {
    std::lock_guard lock(mutex_);
    return high_water_;
}

void LogAppender::run() {
    for (;;) {
        Record r;
        {
            std::unique_lock lock(mutex_);
            not_empty_.wait(lock, [&] { return !queue_.empty() || stopping_; });
            if (queue_.empty()) break;
            r = std::move(queue_.front());
            queue_.pop_front();
            busy_ = true;
        }
        not_full_.notify_one();
        std::string failure;
        if (r.file != open_path_) {
            open_file_.close();
            open_file_.clear();
            open_file_.open(r.file, std::ios::app | std::ios::binary);
            open_path_ = r.file;
        }
        if (!open_file_ || !(open_file_ << r.text) || !open_file_.flush()) failure = "cannot write log " + r.file.string();
        {
            std::lock_guard lock(mutex_);
            busy_ = false;
            if (!failure.empty() && error_.empty()) error_ = failure;
        }
        drained_.notify_all();
        not_full_.notify_all();
    }
    open_file_.close();
}

}  // namespace ttlab::cli
