#pragma once

#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "dom2/errors.hpp"

namespace dom2 {

// Little-endian byte stream helpers for checkpoints. Fixed field order only;
// no maps, so identical state always serializes to identical bytes.
class ByteWriter {
  public:
    std::vector<uint8_t> buf;

    void raw(const void* p, size_t n) {
        const auto* b = static_cast<const uint8_t*>(p);
        buf.insert(buf.end(), b, b + n);
    }
    void u8(uint8_t v) { raw(&v, 1); }
    void u32(uint32_t v) { raw(&v, 4); }
    void u64(uint64_t v) { raw(&v, 8); }
    void f64(double v) { raw(&v, 8); }
    void str(const std::string& s) {
        u64(s.size());
        raw(s.data(), s.size());
    }
    template <class T>
    void array(const T* p, size_t n) {
        u64(n);
        raw(p, n * sizeof(T));
    }
};

class ByteReader {
  public:
    ByteReader(const uint8_t* data, size_t n) : p_(data), end_(data + n) {}

    void raw(void* out, size_t n) {
        if (p_ + n > end_) throw SchemaError("checkpoint: truncated stream");
        std::memcpy(out, p_, n);
        p_ += n;
    }
    uint8_t u8() {
        uint8_t v;
        raw(&v, 1);
        return v;
    }
    uint32_t u32() {
        uint32_t v;
        raw(&v, 4);
        return v;
    }
    uint64_t u64() {
        uint64_t v;
        raw(&v, 8);
        return v;
    }
    double f64() {
        double v;
        raw(&v, 8);
        return v;
    }
    std::string str() {
        const uint64_t n = u64();
        std::string s(n, '\0');
        raw(s.data(), n);
        return s;
    }
    template <class T>
    void array(T* out, size_t expect) {
        const uint64_t n = u64();
        if (n != expect) throw SchemaError("checkpoint: array length mismatch");
        raw(out, n * sizeof(T));
    }
    bool at_end() const { return p_ == end_; }

  private:
    const uint8_t* p_;
    const uint8_t* end_;
};

} // namespace dom2
