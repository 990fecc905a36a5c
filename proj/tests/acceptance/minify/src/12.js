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
