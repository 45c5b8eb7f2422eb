#include "dom2/kernels.hpp"

#include "dom2/errors.hpp"

namespace dom2::kernels {
namespace {

struct Tables {
    Ops<float> f;
    Ops<double> d;
    Backend backend;
};

Backend detect_best() {
    if (__builtin_cpu_supports("avx512f") && __builtin_cpu_supports("avx512dq"))
        return Backend::avx512;
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Backend::avx2;
    return Backend::scalar;
}

Tables build(Backend b) {
    Tables t;
    t.backend = b;
    detail::fill_scalar(t.f, t.d);
    if (b == Backend::avx2 || b == Backend::avx512) detail::fill_avx2(t.f, t.d);
    if (b == Backend::avx512) detail::fill_avx512(t.f, t.d);
    return t;
}

Tables& tables() {
    static Tables t = build(detect_best());
    return t;
}

} // namespace

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
        case Backend::avx512: return "avx512";
    }
    return "?";
}

Backend active_backend() { return tables().backend; }

bool backend_supported(Backend b) {
    switch (b) {
        case Backend::scalar: return true;
        case Backend::avx2: return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
        case Backend::avx512:
            return __builtin_cpu_supports("avx512f") && __builtin_cpu_supports("avx512dq");
    }
    return false;
}

void force_backend(Backend b) {
    if (!backend_supported(b))
        throw ConfigError(std::string("kernel backend not supported on this CPU: ") +
                          backend_name(b));
    tables() = build(b);
}

const Ops<float>& f32() { return tables().f; }
const Ops<double>& f64() { return tables().d; }

} // namespace dom2::kernels
