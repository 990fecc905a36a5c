function debounce(callback, waitMs, immediate) {
  var timer = null;
  var lastArgs;
  return function debounced() {
    var context = this;
    lastArgs = arguments;
    var callNow = immediate && timer === null;
    if (timer !== null) {
      clearTimeout(timer);
    }
    timer = setTimeout(function later() {
      timer = null;
      if (!immediate) {
        callback.apply(context, lastArgs);
      }
    }, waitMs);
    if (callNow) {
      callback.apply(context, lastArgs);
    }
  };
}
