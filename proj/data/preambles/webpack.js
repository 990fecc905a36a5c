//@pattern webpack 5 module cache lookup in __webpack_require__
function r(__start__){var t=n[e];if(void 0!==t)return t.exports;var o=n[e]={exports:{}};return i[e](o,o.exports,r),o.exports}
//@pattern webpack 5 module cache lookup, unminified runtime
function r(__start__){const t=n[e];if(t!==void 0){return t.exports}const o=n[e]={exports:{}};i[e](o,o.exports,r);return o.exports}
//@pattern webpack 5 module cache lookup, call form
function r(e){var t=n[e];if(void 0!==t)return t.exports;var o=n[e]={id:e,loaded:!1,exports:{}};return i[e].call(o.exports,o,o.exports,r),o.loaded=!0,o.exports}
//@pattern webpack 4 __webpack_require__ with installedModules
function r(e){if(n[e])return n[e].exports;var o=n[e]={i:e,l:!1,exports:{}};return t[e].call(o.exports,o,o.exports,r),o.l=!0,o.exports}
//@pattern webpack define-getter helper (__webpack_require__.d)
r.d=function(e,t){for(var n in t)r.o(t,n)&&!r.o(e,n)&&Object.defineProperty(e,n,{enumerable:!0,get:t[n]})}
//@pattern webpack 4 define-getter helper
r.d=function(e,t,n){r.o(e,t)||Object.defineProperty(e,t,{enumerable:!0,get:n})}
//@pattern webpack make-namespace helper (__webpack_require__.r)
r.r=function(e){"undefined"!=typeof Symbol&&Symbol.toStringTag&&Object.defineProperty(e,Symbol.toStringTag,{value:"Module"}),Object.defineProperty(e,"__esModule",{value:!0})}
