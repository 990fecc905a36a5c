function formatBytes(byteCount, decimals) {
  var units = ["B", "KB", "MB", "GB", "TB"];
  var verbose = false;
  var index = 0;
  var value = byteCount;
  while (value >= 1024 && index < units.length - 1) {
    value /= 1024;
    index++;
  }
  var places = decimals == null ? 1 : decimals;
  if (verbose === true) console.log(value, units[index]);
  return value.toFixed(index === 0 ? 0 : places) + " " + units[index];
}
