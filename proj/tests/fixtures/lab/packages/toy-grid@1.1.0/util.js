var LRUCache = function (capacity) {
  this.capacity = capacity;
  this.entries = new Map();
};
LRUCache.prototype.get = function (key) {
  if (!this.entries.has(key)) return undefined;
  var value = this.entries.get(key);
  this.entries.delete(key);
  this.entries.set(key, value);
  return value;
};
LRUCache.prototype.put = function (key, value) {
  if (this.entries.has(key)) this.entries.delete(key);
  this.entries.set(key, value);
  if (this.entries.size > this.capacity) {
    var oldest = this.entries.keys().next().value;
    this.entries.delete(oldest);
  }
};
function levenshtein(left, right) {
  var previous = [];
  var current = [];
  for (var j = 0; j <= right.length; j++) previous[j] = j;
  for (var i = 1; i <= left.length; i++) {
    current[0] = i;
    for (var j2 = 1; j2 <= right.length; j2++) {
      var cost = left.charCodeAt(i - 1) === right.charCodeAt(j2 - 1) ? 0 : 1;
      current[j2] = Math.min(current[j2 - 1] + 1, previous[j2] + 1, previous[j2 - 1] + cost);
    }
    var swap = previous;
    previous = current;
    current = swap;
  }
  return previous[right.length];
}
module.exports = { LRUCache,levenshtein };
