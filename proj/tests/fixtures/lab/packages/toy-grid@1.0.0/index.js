const { LRUCache } = require("./util.js");
var Matrix = (function () {
  function Matrix(rows, columns) {
    this.rows = rows;
    this.columns = columns;
    this.cells = new Array(rows * columns).fill(0);
  }
  Matrix.prototype.get = function (row, column) {
    return this.cells[row * this.columns + column];
  };
  Matrix.prototype.set = function (row, column, value) {
    this.cells[row * this.columns + column] = value;
    return this;
  };
  Matrix.prototype.multiply = function (other) {
    var product = new Matrix(this.rows, other.columns);
    for (var i = 0; i < this.rows; i++) {
      for (var j = 0; j < other.columns; j++) {
        var sum = 0;
        for (var k = 0; k < this.columns; k++) sum += this.get(i, k) * other.get(k, j);
        product.set(i, j, sum);
      }
    }
    return product;
  };
  return Matrix;
})();
function deepMerge(target, source) {
  for (var key in source) {
    if (!Object.prototype.hasOwnProperty.call(source, key)) continue;
    var incoming = source[key];
    var existing = target[key];
    if (incoming && typeof incoming === "object" && !Array.isArray(incoming)) {
      if (!existing || typeof existing !== "object") {
        existing = target[key] = {};
      }
      deepMerge(existing, incoming);
    } else {
      target[key] = incoming;
    }
  }
  return target;
}
globalThis.toyGrid = { Matrix, deepMerge, LRUCache };
