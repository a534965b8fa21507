#include "polykinetic/checkpoint.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "polykinetic/errors.hpp"

namespace polykinetic {

namespace {

constexpr char kMagic[8] = {'P', 'K', 'C', 'H', 'K', 'P', 'T', '1'};

std::string fmt(double v)
{
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}

void put_u64(std::ostream& os, std::uint64_t v)
{
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(std::istream& is)
{
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8)) fail(ErrorKind::Io, "checkpoint: truncated file");
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
}

void put_array(std::ostream& os, const RealVector& a)
{
    for (double v : a) put_u64(os, std::bit_cast<std::uint64_t>(v));
}

RealVector get_array(std::istream& is, std::size_t n)
{
    RealVector a(n);
    for (auto& v : a) v = std::bit_cast<double>(get_u64(is));
    return a;
}

std::size_t to_size(const std::map<std::string, std::string>& h, const std::string& key)
{
    auto it = h.find(key);
    if (it == h.end()) fail(ErrorKind::Io, "checkpoint: header is missing '" + key + "'");
    std::size_t v = 0;
    auto r = std::from_chars(it->second.data(), it->second.data() + it->second.size(), v);
    if (r.ec != std::errc()) fail(ErrorKind::Io, "checkpoint: bad value for '" + key + "'");
    return v;
}

} // namespace

void write_checkpoint(const std::string& path, const State& state, const std::string& fingerprint,
                      const Resolution& res, const std::map<std::string, std::string>& extra)
{
    std::map<std::string, std::string> h = extra;
    h["format"] = "polykinetic-checkpoint";
    h["byte_order"] = "little";
    h["fingerprint"] = fingerprint;
    h["x_grid"] = std::to_string(res.x_grid);
    h["q_degree"] = std::to_string(res.q_degree);
    h["step"] = std::to_string(state.step);
    h["t"] = fmt(state.t);
    h["u_size"] = std::to_string(state.u.values.size());
    h["psi_size"] = std::to_string(state.psi.coeffs.size());
    std::ostringstream text;
    for (const auto& [k, v] : h) text << k << '=' << v << '\n';
    const std::string hs = text.str();

    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) fail(ErrorKind::Io, "cannot open checkpoint for writing: " + path);
    os.write(kMagic, sizeof kMagic);
    put_u64(os, hs.size());
    os.write(hs.data(), static_cast<std::streamsize>(hs.size()));
    put_array(os, state.u.values);
    put_array(os, state.psi.coeffs);
    if (!os) fail(ErrorKind::Io, "failed writing checkpoint: " + path);
}

Checkpoint read_checkpoint(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) fail(ErrorKind::Io, "cannot open checkpoint: " + path);
    char magic[8];
    if (!is.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0)
        fail(ErrorKind::Io, "not a polykinetic checkpoint: " + path);
    const std::uint64_t len = get_u64(is);
    if (len > (1u << 20)) fail(ErrorKind::Io, "checkpoint: header too large");
    std::string hs(len, '\0');
    if (!is.read(hs.data(), static_cast<std::streamsize>(len))) fail(ErrorKind::Io, "checkpoint: truncated header");
    Checkpoint c;
    std::istringstream lines(hs);
    std::string line;
    while (std::getline(lines, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(ErrorKind::Io, "checkpoint: malformed header line");
        c.header[line.substr(0, eq)] = line.substr(eq + 1);
    }
    if (c.header["byte_order"] != "little") fail(ErrorKind::Io, "checkpoint: unsupported byte order");
    c.state.step = static_cast<int>(to_size(c.header, "step"));
    const std::string& ts = c.header["t"];
    std::from_chars(ts.data(), ts.data() + ts.size(), c.state.t);
    c.state.u.values = get_array(is, to_size(c.header, "u_size"));
    c.state.psi.coeffs = get_array(is, to_size(c.header, "psi_size"));
    return c;
}

} // namespace polykinetic
