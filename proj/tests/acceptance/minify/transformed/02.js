class s{constructor(){this.listeners=new Map}on(s,t){const e=this.listeners.get(s)||[];e.push(t);this.listeners.set(s,e);return()=>this.off(s,t)}off(s,t){const e=this.listeners.get(s);if(!e)return;const i=e.indexOf(t);if(i>=0)e.splice(i,1)}emit(s,...t){for(const e of this.listeners.get(s)||[]){e(...t)}}}
