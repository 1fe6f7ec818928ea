#pragma once

#include <gtest/gtest.h>

#include "relevant/error.hpp"

// Fails unless `statement` throws relevant::Error of the given kind.
#define EXPECT_ERROR_KIND(statement, expected_kind)                                                   \
    do {                                                                                              \
        try {                                                                                         \
            (void)(statement);                                                                             \
            ADD_FAILURE() << "expected " << ::relevant::to_string(expected_kind) << ", nothing thrown"; \
        } catch (const ::relevant::Error& e_) {                                                       \
            EXPECT_EQ(e_.kind(), expected_kind) << e_.what();                                         \
        }                                                                                             \
    } while (false)
