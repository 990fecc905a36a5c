function*n(n,o){let t=[];for(const e of n)t.push(e),t.length===o&&(yield t,t=[]);t.length>0&&(yield t)}function o(o,t){const e=[];for(const c of n(o,t))e.push(c.reduce((n,o)=>n+o,0));return e}
