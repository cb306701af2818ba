#include "tensorfun/tensor_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <vector>

namespace tensorfun {

namespace {

class LineReader {
public:
    LineReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

    /// Next non-comment, non-blank line; false at end of input.
    bool next(std::string& line) {
        while (std::getline(in_, line)) {
            ++number_;
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '#')
                continue;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ValidationError(source_ + ":" + std::to_string(number_) + ": " + what);
    }

private:
    std::istream& in_;
    std::string source_;
    int number_ = 0;
};

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
            ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r')
            ++i;
        if (i > start)
            out.push_back(line.substr(start, i - start));
    }
    return out;
}

bool parse_double(std::string_view s, double& out) {
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

bool parse_index(std::string_view s, Index& out) {
    long long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        return false;
    out = static_cast<Index>(v);
    return true;
}

Scalar parse_value(std::string_view tok, const LineReader& reader) {
    double re = 0.0, im = 0.0;
    bool ok;
    if (!tok.empty() && tok.front() == '(') {
        const auto comma = tok.find(',');
        ok = tok.back() == ')' && comma != std::string_view::npos &&
             parse_double(tok.substr(1, comma - 1), re) &&
             parse_double(tok.substr(comma + 1, tok.size() - comma - 2), im);
    } else {
        ok = parse_double(tok, re);
    }
    if (!ok)
        reader.fail("malformed value '" + std::string(tok) + "'");
    if (!std::isfinite(re) || !std::isfinite(im))
        reader.fail("non-finite value '" + std::string(tok) + "'");
    return {re, im};
}

std::string format_value(Scalar z) {
    if (z.imag() == 0.0 && !std::signbit(z.imag()))
        return format_double(z.real());
    return "(" + format_double(z.real()) + "," + format_double(z.imag()) + ")";
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, res.ptr};
}

Tensor3 read_tensor(std::istream& in, const std::string& source) {
    LineReader reader(in, source);
    std::string line;
    if (!reader.next(line))
        reader.fail("missing header");
    const auto header = split(line);
    const bool sparse = !header.empty() && header.front() == "sparse";
    const std::size_t dims_at = sparse ? 1 : 0;
    if (header.size() != dims_at + (sparse ? 4 : 3))
        reader.fail(sparse ? "header must be 'sparse n1 n2 p nnz'" : "header must be 'n1 n2 p'");
    Index n1, n2, p, nnz = 0;
    if (!parse_index(header[dims_at], n1) || !parse_index(header[dims_at + 1], n2) ||
        !parse_index(header[dims_at + 2], p) ||
        (sparse && !parse_index(header[dims_at + 3], nnz)) || n1 < 1 || n2 < 1 || p < 1 ||
        nnz < 0)
        reader.fail("invalid dimensions in header");

    Tensor3 t(n1, n2, p);
    if (sparse) {
        for (Index e = 0; e < nnz; ++e) {
            if (!reader.next(line))
                reader.fail("expected " + std::to_string(nnz) + " entries, found " +
                            std::to_string(e));
            const auto tok = split(line);
            Index i, j, k;
            if (tok.size() != 4 || !parse_index(tok[0], i) || !parse_index(tok[1], j) ||
                !parse_index(tok[2], k))
                reader.fail("entry must be 'i j k value'");
            if (i < 1 || i > n1 || j < 1 || j > n2 || k < 1 || k > p)
                reader.fail("entry index out of range");
            t(i - 1, j - 1, k - 1) = parse_value(tok[3], reader);
        }
    } else {
        for (Index k = 0; k < p; ++k)
            for (Index i = 0; i < n1; ++i) {
                if (!reader.next(line))
                    reader.fail("expected " + std::to_string(n1 * p) + " rows, found " +
                                std::to_string(k * n1 + i));
                const auto tok = split(line);
                if (static_cast<Index>(tok.size()) != n2)
                    reader.fail("expected " + std::to_string(n2) + " values, found " +
                                std::to_string(tok.size()));
                for (Index j = 0; j < n2; ++j)
                    t(i, j, k) = parse_value(tok[static_cast<std::size_t>(j)], reader);
            }
    }
    if (reader.next(line))
        reader.fail("unexpected trailing data");
    return t;
}

Tensor3 load_tensor(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open " + path.string());
    return read_tensor(in, path.string());
}

void write_tensor(std::ostream& out, const Tensor3& t, TensorFormat format) {
    if (format == TensorFormat::sparse) {
        Index nnz = 0;
        for (const auto& z : t.data())
            nnz += z != Scalar(0.0);
        out << "sparse " << t.rows() << ' ' << t.cols() << ' ' << t.depth() << ' ' << nnz
            << '\n';
        for (Index k = 0; k < t.depth(); ++k)
            for (Index j = 0; j < t.cols(); ++j)
                for (Index i = 0; i < t.rows(); ++i)
                    if (t(i, j, k) != Scalar(0.0))
                        out << i + 1 << ' ' << j + 1 << ' ' << k + 1 << ' '
                            << format_value(t(i, j, k)) << '\n';
        return;
    }
    out << t.rows() << ' ' << t.cols() << ' ' << t.depth() << '\n';
    for (Index k = 0; k < t.depth(); ++k) {
        out << "# slice " << k + 1 << '\n';
        for (Index i = 0; i < t.rows(); ++i) {
            for (Index j = 0; j < t.cols(); ++j)
                out << (j ? " " : "") << format_value(t(i, j, k));
            out << '\n';
        }
    }
}

void save_tensor(const std::filesystem::path& path, const Tensor3& t, TensorFormat format) {
    std::ofstream out(path);
    if (!out)
        throw ValidationError("cannot write " + path.string());
    write_tensor(out, t, format);
    if (!out)
        throw ValidationError("write failed: " + path.string());
}

}  // namespace tensorfun
