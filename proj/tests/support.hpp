#pragma once

#include <functional>

#include <gtest/gtest.h>

#include "ontic/error.hpp"

namespace support {

/// Kind of the ontic::Error thrown by `f`; fails the test when nothing is thrown.
inline ontic::ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const ontic::Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected an ontic::Error";
    return ontic::ErrorKind::InvalidModel;
}

}  // namespace support
