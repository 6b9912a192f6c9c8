#pragma once

#include "korenblum/carleson.hpp"
#include "korenblum/premeasure.hpp"

#include <string>
#include <string_view>

namespace korenblum {

/// Terms joined by `+`, each optionally prefixed `<coef>*`:
///   `zero`, `lebesgue:<s>`, `atom:<angle>,<mass>`,
///   `cantor:<rule>[,n=<stages>][,offset=<r>,width=<r>]`,
///   `example2:alpha0=<r>,K=<int>`, `trig:c1=<r>,s2=<r>,...`,
///   `step:breaks=<b0;b1;...>,values=<v0;...>`.
/// Without a `lebesgue` term, atoms and Cantor terms describe a positive
/// measure w and are balanced to w(T) m - w; with one they are taken as given.
/// ParseError on bad syntax or an unbalanced result.
Premeasure parse_premeasure(std::string_view spec);

/// `points:<angle>,...`, `arcs:<arc>;<arc>;...`, `cantor-stage:<rule>,n=<int>`,
/// `cantor:<rule>[,offset=<r>,width=<r>,stages=<int>]`.
CarlesonSet parse_set(std::string_view spec);

}  // namespace korenblum
