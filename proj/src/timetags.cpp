#include "dualring/timetags.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "dualring/rng.hpp"

namespace dualring {

void TimeTagStream::validate() const {
    if (duration_ps == 0 && !tags.empty())
        throw std::invalid_argument("non-empty stream with zero duration");
    if (!std::is_sorted(tags.begin(), tags.end()))
        throw std::invalid_argument("time tags must be sorted");
    if (!tags.empty() && tags.back() >= duration_ps)
        throw std::invalid_argument("time tag at or beyond stream duration");
}

std::pair<TimeTagStream, TimeTagStream> split_stream(const TimeTagStream& stream,
                                                     double ratio, std::uint64_t seed,
                                                     std::uint32_t channel_a,
                                                     std::uint32_t channel_b) {
    if (ratio < 0.0 || ratio > 1.0)
        throw std::invalid_argument("splitter ratio must be in [0,1]");
    Rng rng(seed, 0x73706c6974ULL);  // dedicated splitter stream
    TimeTagStream a, b;
    a.channel = channel_a;
    b.channel = channel_b;
    a.duration_ps = b.duration_ps = stream.duration_ps;
    for (std::uint64_t t : stream.tags)
        (rng.bernoulli(ratio) ? a : b).tags.push_back(t);
    return {std::move(a), std::move(b)};
}

TimeTagStream merge_streams(const std::vector<TimeTagStream>& streams) {
    TimeTagStream out;
    if (streams.empty()) return out;
    out.channel = streams.front().channel;
    out.duration_ps = streams.front().duration_ps;
    std::size_t total = 0;
    for (const auto& s : streams) {
        if (s.duration_ps != out.duration_ps)
            throw std::invalid_argument("cannot merge streams of different durations");
        total += s.tags.size();
    }
    out.tags.reserve(total);

    // k-way merge on a min-heap of (value, source index).
    using Entry = std::pair<std::uint64_t, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    std::vector<std::size_t> pos(streams.size(), 0);
    for (std::size_t i = 0; i < streams.size(); ++i)
        if (!streams[i].tags.empty()) heap.emplace(streams[i].tags[0], i);
    while (!heap.empty()) {
        auto [value, i] = heap.top();
        heap.pop();
        out.tags.push_back(value);
        if (++pos[i] < streams[i].tags.size()) heap.emplace(streams[i].tags[pos[i]], i);
    }
    return out;
}

namespace {

template <typename T>
void write_le(std::ofstream& out, T value) {
    unsigned char buf[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i)
        buf[i] = static_cast<unsigned char>((value >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T read_le(std::istream& in) {
    unsigned char buf[sizeof(T)];
    in.read(reinterpret_cast<char*>(buf), sizeof(T));
    if (!in) throw std::runtime_error("truncated time-tag file");
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
        value |= static_cast<T>(buf[i]) << (8 * i);
    return value;
}

}  // namespace

void write_timetag_file(const std::string& path,
                        const std::map<std::uint32_t, TimeTagStream>& streams) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    std::uint64_t total = 0;
    std::uint64_t duration = 0;
    for (const auto& [ch, s] : streams) {
        s.validate();
        total += s.tags.size();
        duration = std::max(duration, s.duration_ps);
    }
    out.write(kTagFileMagic, sizeof(kTagFileMagic));
    write_le<std::uint64_t>(out, total);
    write_le<std::uint64_t>(out, duration);
    for (const auto& [ch, s] : streams) {
        for (std::uint64_t t : s.tags) {
            write_le<std::uint64_t>(out, t);
            write_le<std::uint32_t>(out, ch);
            write_le<std::uint32_t>(out, 0);
        }
    }
    if (!out) throw std::runtime_error("write failure on " + path);
}

std::map<std::uint32_t, TimeTagStream> read_timetag_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kTagFileMagic, sizeof(magic)) != 0)
        throw std::runtime_error(path + ": not a time-tag file (bad magic)");
    const auto count = read_le<std::uint64_t>(in);
    const auto duration = read_le<std::uint64_t>(in);
    std::map<std::uint32_t, TimeTagStream> streams;
    for (std::uint64_t i = 0; i < count; ++i) {
        const auto t = read_le<std::uint64_t>(in);
        const auto ch = read_le<std::uint32_t>(in);
        read_le<std::uint32_t>(in);  // reserved
        auto& s = streams[ch];
        s.channel = ch;
        s.duration_ps = duration;
        s.tags.push_back(t);
    }
    in.peek();
    if (!in.eof()) throw std::runtime_error(path + ": trailing bytes after records");
    for (auto& [ch, s] : streams) {
        std::sort(s.tags.begin(), s.tags.end());
        s.validate();
    }
    return streams;
}

std::map<std::uint32_t, TimeTagStream> read_timetag_csv(const std::string& path,
                                                        std::uint64_t duration_ps) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "channel,timestamp_ps")
        throw std::runtime_error(path + ": expected header channel,timestamp_ps");
    std::map<std::uint32_t, TimeTagStream> streams;
    std::uint64_t max_tag = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string a, b;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b))
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected channel,timestamp_ps");
        const auto ch = static_cast<std::uint32_t>(std::stoul(a));
        const auto t = static_cast<std::uint64_t>(std::stoull(b));
        auto& s = streams[ch];
        s.channel = ch;
        s.tags.push_back(t);
        max_tag = std::max(max_tag, t);
    }
    const std::uint64_t duration = duration_ps ? duration_ps : max_tag + 1;
    for (auto& [ch, s] : streams) {
        s.duration_ps = duration;
        std::sort(s.tags.begin(), s.tags.end());
        s.validate();
    }
    return streams;
}

}  // namespace dualring
