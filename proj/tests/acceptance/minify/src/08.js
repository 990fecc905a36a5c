function createStore(reducer, initialState) {
  let state = initialState;
  let subscribers = [];
  function getState() {
    return state;
  }
  function subscribe(listener) {
    subscribers.push(listener);
    return function unsubscribe() {
      subscribers = subscribers.filter((candidate) => candidate !== listener);
    };
  }
  function dispatch(action) {
    if (typeof action.type !== "string") {
      throw new TypeError("actions need a string type");
    }
    state = reducer(state, action);
    subscribers.slice().forEach((listener) => listener());
    return action;
  }
  dispatch({ type: "@@init" });
  return { getState, subscribe, dispatch };
}
