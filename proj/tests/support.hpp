#pragma once

#include <doctest.h>

#include "smnn/error.hpp"

// Kind of the smnn::Error thrown by fn; fails the test if nothing is thrown.
template <class Fn>
smnn::ErrorKind kind_of(Fn&& fn) {
  try {
    fn();
  } catch (const smnn::Error& e) {
    return e.kind();
  }
  FAIL("expected an smnn::Error");
  return smnn::ErrorKind::IoError;
}
