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
